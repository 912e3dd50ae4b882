use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pathspectra"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&run(&["fig11"], d)), 2);
    assert_eq!(code(&run(&["distribution", "--set", "colour=red"], d)), 2);
    assert_eq!(code(&run(&["distribution", "--set", "t"], d)), 2);
    assert_eq!(code(&run(&["reconstruct", "--set", "p1=1"], d)), 2);
    assert_eq!(code(&run(&["time-average", "--set", "system=free", "--set", "quantum=1"], d)), 3);
    assert_eq!(code(&run(&["distribution", "--set", "mass=-1"], d)), 3);
    assert_eq!(code(&run(&["phasor", "--set", "t=pi", "--set", "x_f=0.5"], d)), 4);

    let blocker = d.join("file");
    std::fs::write(&blocker, "x").unwrap();
    assert_eq!(code(&run(&["fig10"], &blocker.join("sub"))), 5);
}

#[test]
fn dump_config_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["fig1", "--set", "dp_c=0.002", "--threads", "2", "--dump-config"], dir.path());
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("system = free"));
    assert!(text.contains("threads = 2"));
    let file = dir.path().join("cfg.txt");
    std::fs::write(&file, &text).unwrap();
    let again = Command::new(env!("CARGO_BIN_EXE_pathspectra"))
        .args(["fig1", "--dump-config", "--config"])
        .arg(&file)
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(again.stdout).unwrap(), text);
    // Nothing is written by a dump.
    assert!(std::fs::read_dir(dir.path()).unwrap().count() == 1);
}

#[test]
fn free_distribution_stage_writes_data_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = run(&["distribution", "--set", "system=free", "--set", "quantum=1", "--set", "t=1e4", "--set", "dp_c=1e-3"], d);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let moments = std::fs::read_to_string(d.join("distribution_moments.csv")).unwrap();
    let row: Vec<f64> = moments.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((row[0] - 1.0).abs() < 1e-6, "norm {}", row[0]);
    assert!((row[1] - 1.0).abs() < 1e-3, "mean {}", row[1]);
    let data = std::fs::read_to_string(d.join("distribution.csv")).unwrap();
    assert!(data.starts_with("p_c,re,im\n"));

    let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("distribution.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["name"], "distribution");
    assert_eq!(m["config"]["system"], "free");
    assert!(m["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    assert!(m["outputs"].as_array().unwrap().iter().any(|f| f == "distribution.csv"));

    // A manifest is accepted as a config and reproduces the data.
    let again = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_pathspectra"))
        .arg("distribution")
        .arg("--config")
        .arg(d.join("distribution.manifest.json"))
        .arg("--out")
        .arg(again.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read(again.path().join("distribution.csv")).unwrap(), data.as_bytes());
}

#[test]
fn json_format_and_empty_band() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = run(
        &["reconstruct", "--set", "system=free", "--set", "quantum=1", "--set", "t=20", "--set", "p1=1", "--set", "p2=1", "--format", "json"],
        d,
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("reconstruct.json")).unwrap()).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r[1] == 0.0 && r[2] == 0.0));
}

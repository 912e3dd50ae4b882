use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use pathspectra::config::{split_pair, Format, RunConfig};
use pathspectra::figures::{run, Job};
use pathspectra::{Error, Result};

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

/// Path distributions of quantum eigenstates: figure presets and pipeline
/// stages writing CSV data plus a JSON manifest.
#[derive(Parser)]
#[command(name = "pathspectra", version)]
struct Cli {
    /// fig1, fig2, fig7, fig8, fig9, fig10, phasor, window, distribution,
    /// time-average, reconstruct or compare.
    job: String,

    /// Flat `key = value` file, or a manifest from an earlier run.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Override one key; repeatable, applied after --config.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,

    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum)]
    format: Option<FormatArg>,

    /// Worker threads (default: all hardware threads).
    #[arg(long)]
    threads: Option<usize>,

    /// Print the effective parameters and exit.
    #[arg(long)]
    dump_config: bool,
}

fn effective_config(cli: &Cli, job: Job) -> Result<RunConfig> {
    let mut cfg = job.base_config();
    if let Some(path) = &cli.config {
        cfg = cfg.with_file(path)?;
    }
    let pairs = cli.set.iter().map(|s| split_pair(s)).collect::<Result<Vec<_>>>()?;
    cfg = cfg.with_pairs(&pairs)?;
    if let Some(out) = &cli.out {
        cfg.out = out.display().to_string();
    }
    if let Some(f) = cli.format {
        cfg.format = match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        };
    }
    if cli.threads.is_some() {
        cfg.threads = cli.threads;
    }
    Ok(cfg)
}

fn main_inner(cli: Cli) -> Result<()> {
    let job: Job = cli.job.parse()?;
    let cfg = effective_config(&cli, job)?;
    if cli.dump_config {
        print!("{}", cfg.dump());
        return Ok(());
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.threads {
        if n == 0 {
            return Err(Error::Usage("--threads must be at least 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| Error::Usage(format!("cannot start worker threads: {e}")))?;
    let report = pool.install(|| run(job, &cfg))?;
    for f in &report.outputs {
        log::info!("wrote {}", PathBuf::from(&cfg.out).join(f).display());
    }
    for c in &report.checks {
        println!("{} {} = {} (expected {}, tolerance {})", if c.pass { "ok  " } else { "FAIL" }, c.name, c.value, c.expected, c.tolerance);
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pathspectra: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

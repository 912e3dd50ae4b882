//! Figure presets and pipeline stages behind the command-line tool.

use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::compare::{coherent_overlap, momentum_density_analytic, wigner_momentum_marginal};
use crate::config::RunConfig;
use crate::distribution::{moments, spatial_average, time_average, Moments, PathDistribution};
use crate::error::{domain, Error, Result};
use crate::output::{Check, Sink, Table};
use crate::phasor::{composite_grid, integrand, phasor_curve, WindowEvaluator};
use crate::quadrature::{GridBundle, UniformGrid};
use crate::reconstruct::{reconstruct, reconstruct_bands, Band, ReconstructionResult};
use crate::systems::{EigenstateSpec, SystemKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig1,
    Fig2,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Phasor,
    Window,
    Distribution,
    TimeAverage,
    Reconstruct,
    Compare,
}

/// Something the tool can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Job {
    Figure(Preset),
    Stage(Stage),
}

impl FromStr for Job {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "fig1" => Job::Figure(Preset::Fig1),
            "fig2" => Job::Figure(Preset::Fig2),
            "fig7" => Job::Figure(Preset::Fig7),
            "fig8" => Job::Figure(Preset::Fig8),
            "fig9" => Job::Figure(Preset::Fig9),
            "fig10" => Job::Figure(Preset::Fig10),
            "phasor" => Job::Stage(Stage::Phasor),
            "window" => Job::Stage(Stage::Window),
            "distribution" => Job::Stage(Stage::Distribution),
            "time-average" => Job::Stage(Stage::TimeAverage),
            "reconstruct" => Job::Stage(Stage::Reconstruct),
            "compare" => Job::Stage(Stage::Compare),
            other => {
                return Err(Error::Usage(format!(
                    "unknown preset or stage '{other}' (fig1, fig2, fig7, fig8, fig9, fig10, phasor, window, \
                     distribution, time-average, reconstruct, compare)"
                )))
            }
        })
    }
}

impl Job {
    pub fn name(&self) -> &'static str {
        match self {
            Job::Figure(Preset::Fig1) => "fig1",
            Job::Figure(Preset::Fig2) => "fig2",
            Job::Figure(Preset::Fig7) => "fig7",
            Job::Figure(Preset::Fig8) => "fig8",
            Job::Figure(Preset::Fig9) => "fig9",
            Job::Figure(Preset::Fig10) => "fig10",
            Job::Stage(Stage::Phasor) => "phasor",
            Job::Stage(Stage::Window) => "window",
            Job::Stage(Stage::Distribution) => "distribution",
            Job::Stage(Stage::TimeAverage) => "time-average",
            Job::Stage(Stage::Reconstruct) => "reconstruct",
            Job::Stage(Stage::Compare) => "compare",
        }
    }

    /// Configuration a job starts from before file and command-line
    /// overrides are applied.
    pub fn base_config(&self) -> RunConfig {
        let mut c = RunConfig::default();
        match self {
            Job::Figure(Preset::Fig1 | Preset::Fig2) => {
                c.system = "free".into();
                c.quantum = 1.0;
                c.t = 1e4;
            }
            Job::Figure(Preset::Fig7) => c.dp_c = Some(0.02),
            _ => {}
        }
        c
    }
}

/// What a run produced, as recorded in its manifest.
#[derive(Debug, Default, Serialize)]
pub struct Report {
    pub outputs: Vec<String>,
    pub checks: Vec<Check>,
    pub grids: Vec<Value>,
}

impl Report {
    fn grids(&mut self, label: &str, g: &GridBundle) {
        self.grids.push(json!({ "label": label, "grids": g }));
    }
}

/// Runs a job, writes its data files plus `<name>.manifest.json` into
/// `cfg.out`, and returns the report.
pub fn run(job: Job, cfg: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    let mut sink = Sink::new(&cfg.out, cfg.format)?;
    let mut report = Report::default();
    match job {
        Job::Figure(p) => run_figure(p, cfg, &mut sink, &mut report)?,
        Job::Stage(s) => run_stage(s, cfg, &mut sink, &mut report)?,
    }
    report.outputs = sink.files.clone();
    let manifest = json!({
        "name": job.name(),
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg,
        "effective_parameters": cfg.dump(),
        "grids": report.grids,
        "runtime_seconds": start.elapsed().as_secs_f64(),
        "threads": rayon::current_num_threads(),
        "checks": report.checks,
        "outputs": report.outputs,
    });
    let mut body = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    body.push('\n');
    sink.write(&format!("{}.manifest.json", job.name()), &body)?;
    for c in report.checks.iter().filter(|c| !c.pass) {
        log::warn!("check {} failed: {} vs {} (tolerance {})", c.name, c.value, c.expected, c.tolerance);
    }
    Ok(report)
}

fn complex_table(head: &str, xs: &[f64], vs: &[num_complex::Complex64]) -> Table {
    let mut t = Table::new(&[head, "re", "im"]);
    for (x, v) in xs.iter().zip(vs) {
        t.push(vec![*x, v.re, v.im]);
    }
    t
}

fn moments_table(m: &Moments) -> Table {
    let mut t = Table::new(&["norm", "mean", "peak_location", "fwhm", "max_im_ratio"]);
    t.push(vec![m.norm, m.mean, m.peak_location, m.fwhm, m.max_im_ratio]);
    t
}

/// Grid for a phasor curve: dense around the stationary momentum for the
/// stationary systems, uniform over the default p_c range for the
/// oscillator.
fn phasor_grid(state: &EigenstateSpec, cfg: &RunConfig) -> Result<Vec<f64>> {
    let w = state.system().window_halfwidth(cfg.t);
    if state.system().is_oscillator() || cfg.p_c_max.is_some() {
        let g = GridBundle::for_state(state, cfg.t, &cfg.overrides())?;
        let half = cfg.p_c_max.unwrap_or(g.p_c.max_abs());
        return Ok(UniformGrid::symmetric(half, cfg.dp_c.unwrap_or(0.01 * w))?.points());
    }
    Ok(composite_grid(state.stationary_momentum(), 50.0 * w, 0.01 * w, 800.0 * w, w))
}

fn stage_phasor(cfg: &RunConfig, sink: &mut Sink, report: &mut Report, stem: &str) -> Result<()> {
    let state = cfg.state()?;
    let grid = phasor_grid(&state, cfg)?;
    let curve = phasor_curve(&state, cfg.x_f, cfg.t, &grid)?;
    sink.table(stem, &complex_table("p_c", &curve.p_c, &curve.cumulative))?;
    if !state.system().is_oscillator() {
        let psi = state.eigenfunction(cfg.x_f)?;
        let end = curve.final_value();
        report.checks.push(Check::at_most("endpoint_minus_psi", (end - psi).norm(), 1e-3));
        if let Some(mid) = curve.value_at(state.stationary_momentum()) {
            report.checks.push(Check::at_most("midpoint_minus_half_endpoint", (mid - 0.5 * end).norm(), 1e-3 * end.norm()));
        }
    }
    Ok(())
}

fn stage_window(cfg: &RunConfig, sink: &mut Sink, report: &mut Report, stem: &str) -> Result<()> {
    let state = cfg.state()?;
    let g = GridBundle::for_state(&state, cfg.t, &cfg.overrides())?;
    report.grids(stem, &g);
    let p = g.p_c.points();
    let eval = WindowEvaluator::for_grid(&state, cfg.x_f, cfg.t, &p, &g)?;
    let mut t = Table::new(&["p_c", "integrand_re", "integrand_im", "window_re", "window_im"]);
    let mut best = (f64::NEG_INFINITY, 0.0);
    for &pc in &p {
        // A node sitting exactly on the oscillator divergence has no value.
        let f = match integrand(&state, pc, cfg.x_f, cfg.t) {
            Ok(f) => f,
            Err(Error::DivergentSample(_)) => continue,
            Err(e) => return Err(e),
        };
        let wa = eval.window_average(pc);
        if wa.norm() > best.0 {
            best = (wa.norm(), pc);
        }
        t.push(vec![pc, f.re, f.im, wa.re, wa.im]);
    }
    sink.table(stem, &t)?;
    if !state.system().is_oscillator() {
        report.checks.push(Check::near(
            "window_peak_abs_p_c",
            best.1.abs(),
            state.stationary_momentum().abs(),
            g.p_c.step,
        ));
    }
    Ok(())
}

fn distribution_checks(report: &mut Report, label: &str, d: &PathDistribution, m: &Moments) {
    if !d.state.system().is_oscillator() {
        // One delta peak at ħk on the line and circle, a symmetric pair in
        // the bounded systems.
        let mean = match d.state.system().kind {
            SystemKind::FreeLine | SystemKind::Circle { .. } => d.state.stationary_momentum(),
            _ => 0.0,
        };
        report.checks.push(Check::near(format!("{label}_norm"), m.norm, 1.0, 1e-6));
        report.checks.push(Check::near(format!("{label}_mean"), m.mean, mean, 1e-3));
        return;
    }
    report.checks.push(Check::near(format!("{label}_norm"), m.norm, 1.0, 2e-2));
    report.checks.push(Check::at_most(format!("{label}_max_im_ratio"), m.max_im_ratio, 1e-2));
    let min_re = d.values.iter().map(|v| v.re).fold(f64::INFINITY, f64::min);
    report.checks.push(Check::at_most(format!("{label}_negative_re_ratio"), (-min_re).max(0.0) / d.max_re(), 1e-2));
}

fn stage_distribution(cfg: &RunConfig, sink: &mut Sink, report: &mut Report, averaged: bool) -> Result<()> {
    let state = cfg.state()?;
    if averaged && !state.system().is_oscillator() {
        return domain(format!("time averaging applies to the oscillator, not the {} system", cfg.system));
    }
    let g = GridBundle::for_state(&state, cfg.t, &cfg.overrides())?;
    let stem = if averaged { "time_average" } else { "distribution" };
    report.grids(stem, &g);
    let d = if averaged { time_average(&state, cfg.t, &g)? } else { spatial_average(&state, cfg.t, &g)? };
    let m = moments(&d)?;
    sink.table(stem, &complex_table("p_c", &d.p_c, &d.values))?;
    sink.table(&format!("{stem}_moments"), &moments_table(&m))?;
    distribution_checks(report, stem, &d, &m);
    Ok(())
}

fn reconstruction_table(r: &ReconstructionResult) -> Table {
    complex_table("x_f", &r.x_f, &r.values)
}

/// max|value − ψ| / max|ψ| over the grid.
fn relative_deviation(state: &EigenstateSpec, r: &ReconstructionResult) -> Result<f64> {
    let (mut dev, mut top) = (0.0f64, 0.0f64);
    for (x, v) in r.x_f.iter().zip(&r.values) {
        let psi = state.eigenfunction(*x)?;
        dev = dev.max((v - psi).norm());
        top = top.max(psi.norm());
    }
    Ok(dev / top)
}

/// max|value| beyond the turning points over max|value| anywhere.
pub fn outside_turning_ratio(r: &ReconstructionResult, turning: f64) -> f64 {
    let (mut out, mut all) = (0.0f64, 0.0f64);
    for (x, v) in r.x_f.iter().zip(&r.values) {
        all = all.max(v.norm());
        if x.abs() > turning {
            out = out.max(v.norm());
        }
    }
    if all == 0.0 {
        0.0
    } else {
        out / all
    }
}

fn stage_reconstruct(cfg: &RunConfig, sink: &mut Sink, report: &mut Report) -> Result<()> {
    let state = cfg.state()?;
    let g = GridBundle::for_state(&state, cfg.t, &cfg.overrides())?;
    report.grids("reconstruct", &g);
    let band = cfg.band()?;
    let r = reconstruct(&state, band, cfg.t, &g)?;
    sink.table("reconstruct", &reconstruction_table(&r))?;
    if band == Band::Full {
        report.checks.push(Check::at_most("full_band_relative_deviation", relative_deviation(&state, &r)?, 1e-2));
    }
    Ok(())
}

/// (p, numeric marginal, closed form) for one oscillator level.
fn wigner_table(n: u32, cfg: &RunConfig) -> Result<(Table, f64)> {
    let c = cfg.ho_constants()?;
    let (len, mom) = (c.length_scale(), c.momentum_scale());
    let xg = UniformGrid::symmetric((5.0 * f64::from(2 * n + 1).sqrt() + 2.0) * len, 0.01 * len)?;
    let pg = UniformGrid::symmetric(6.0 * mom, 0.01 * mom)?;
    let mut t = Table::new(&["p", "marginal", "analytic"]);
    let mut worst = 0.0f64;
    for p in pg.points() {
        let num = wigner_momentum_marginal(n, p, &c, &xg)?;
        let exact = momentum_density_analytic(n, p, &c)?;
        worst = worst.max((num - exact).abs());
        t.push(vec![p, num, exact]);
    }
    Ok((t, worst))
}

fn coherent_table(levels: &[u32], alpha_max: f64, step: f64) -> Result<(Table, Vec<f64>)> {
    let mut cols = vec!["alpha".to_string()];
    cols.extend(levels.iter().map(|n| format!("c{n}")));
    let mut t = Table { columns: cols, rows: Vec::new() };
    let count = (alpha_max / step).round() as usize;
    let mut best = vec![(f64::NEG_INFINITY, 0.0); levels.len()];
    for i in 0..=count {
        let a = i as f64 * step;
        let mut row = vec![a];
        for (k, &n) in levels.iter().enumerate() {
            let v = coherent_overlap(n, a)?;
            if v > best[k].0 {
                best[k] = (v, a);
            }
            row.push(v);
        }
        t.push(row);
    }
    Ok((t, best.iter().map(|b| b.1).collect()))
}

fn poisson_total(alpha: f64, n_max: u32) -> Result<f64> {
    let mut acc = crate::quadrature::RealSum::new();
    for n in 0..=n_max {
        acc.add(coherent_overlap(n, alpha)?);
    }
    Ok(acc.value())
}

fn stage_compare(cfg: &RunConfig, sink: &mut Sink, report: &mut Report) -> Result<()> {
    let state = cfg.state()?;
    let Some(n) = state.level().filter(|_| state.system().is_oscillator()) else {
        return domain(format!("comparisons are defined for the oscillator, not the {} system", cfg.system));
    };
    let (t, worst) = wigner_table(n, cfg)?;
    sink.table("compare_wigner", &t)?;
    report.checks.push(Check::at_most("wigner_marginal_max_error", worst, 1e-8));
    let (t, arg) = coherent_table(&[n], 3.0 + f64::from(n).sqrt(), 1e-4)?;
    sink.table("compare_coherent", &t)?;
    report.checks.push(Check::near("coherent_argmax", arg[0], f64::from(n).sqrt(), 1e-3));
    Ok(())
}

fn run_stage(stage: Stage, cfg: &RunConfig, sink: &mut Sink, report: &mut Report) -> Result<()> {
    match stage {
        Stage::Phasor => stage_phasor(cfg, sink, report, "phasor"),
        Stage::Window => stage_window(cfg, sink, report, "window"),
        Stage::Distribution => stage_distribution(cfg, sink, report, false),
        Stage::TimeAverage => stage_distribution(cfg, sink, report, true),
        Stage::Reconstruct => stage_reconstruct(cfg, sink, report),
        Stage::Compare => stage_compare(cfg, sink, report),
    }
}

fn oscillator(cfg: &RunConfig, n: u32) -> Result<EigenstateSpec> {
    EigenstateSpec::ho(n, cfg.ho_constants()?)
}

fn fig7(cfg: &RunConfig, sink: &mut Sink, report: &mut Report) -> Result<()> {
    for n in 0..4 {
        let state = oscillator(cfg, n)?;
        let g = GridBundle::for_state(&state, cfg.t, &cfg.overrides())?;
        report.grids(&format!("n{n}"), &g);
        let d = time_average(&state, cfg.t, &g)?;
        sink.table(&format!("fig7_n{n}"), &complex_table("p_c", &d.p_c, &d.values))?;
        let m = moments(&d)?;
        let peak = moments(&d.folded()?)?.peak_location;
        let expected = (2.0 * state.system().mass * state.energy()).sqrt();
        report.checks.push(Check::near(format!("n{n}_peak_abs_p_c"), peak, expected, g.p_c.step));
        distribution_checks(report, &format!("n{n}"), &d, &m);
    }
    Ok(())
}

/// Half-width of the narrow band placed on √(2ME_n).
pub const NARROW_BAND_HALFWIDTH: f64 = 0.05;

/// Bands drawn for one oscillator level: the full band, a narrow band on
/// √(2ME_n), and the two sides of that value.
pub fn fig8_bands(state: &EigenstateSpec, g: &GridBundle) -> Vec<(&'static str, Band)> {
    let e = (2.0 * state.system().mass * state.energy()).sqrt();
    let c = state.system().ho_constants().expect("oscillator");
    let half = NARROW_BAND_HALFWIDTH * c.momentum_scale();
    let top = crate::reconstruct::full_band_limit(state, g);
    vec![
        ("full", Band::Full),
        ("narrow", Band::Range(e - half, e + half)),
        ("inner", Band::Range(0.0, e)),
        ("outer", Band::Range(e, top)),
    ]
}

fn fig8(cfg: &RunConfig, sink: &mut Sink, report: &mut Report) -> Result<()> {
    for n in [0, 3] {
        let state = oscillator(cfg, n)?;
        let g = GridBundle::for_state(&state, cfg.t, &cfg.overrides())?;
        report.grids(&format!("n{n}"), &g);
        let bands = fig8_bands(&state, &g);
        let only: Vec<Band> = bands.iter().map(|b| b.1).collect();
        let results = reconstruct_bands(&state, &only, cfg.t, &g)?;
        for ((label, _), r) in bands.iter().zip(&results) {
            sink.table(&format!("fig8_n{n}_{label}"), &reconstruction_table(r))?;
        }
        report.checks.push(Check::at_most(format!("n{n}_full_relative_deviation"), relative_deviation(&state, &results[0])?, 1e-2));
        let c = state.system().ho_constants().expect("oscillator");
        let turning = (2.0 * state.energy() / (c.mass * c.omega * c.omega)).sqrt();
        report.checks.push(Check::at_most(format!("n{n}_narrow_outside_ratio"), outside_turning_ratio(&results[1], turning), 5e-2));
    }
    Ok(())
}

fn fig9(cfg: &RunConfig, sink: &mut Sink, report: &mut Report) -> Result<()> {
    for n in 0..4 {
        let (t, worst) = wigner_table(n, cfg)?;
        sink.table(&format!("fig9_n{n}"), &t)?;
        report.checks.push(Check::at_most(format!("n{n}_marginal_max_error"), worst, 1e-8));
    }
    Ok(())
}

fn fig10(_cfg: &RunConfig, sink: &mut Sink, report: &mut Report) -> Result<()> {
    let levels = [0, 1, 2, 3];
    let (t, arg) = coherent_table(&levels, 3.0, 1e-4)?;
    sink.table("fig10", &t)?;
    for (n, a) in levels.iter().zip(&arg) {
        report.checks.push(Check::near(format!("n{n}_argmax_alpha"), *a, f64::from(*n).sqrt(), 1e-3));
    }
    report.checks.push(Check::near("poisson_total_alpha_1.5_n40", poisson_total(1.5, 40)?, 1.0, 1e-10));
    Ok(())
}

fn run_figure(preset: Preset, cfg: &RunConfig, sink: &mut Sink, report: &mut Report) -> Result<()> {
    match preset {
        Preset::Fig1 => stage_phasor(cfg, sink, report, "fig1"),
        Preset::Fig2 => stage_window(cfg, sink, report, "fig2"),
        Preset::Fig7 => fig7(cfg, sink, report),
        Preset::Fig8 => fig8(cfg, sink, report),
        Preset::Fig9 => fig9(cfg, sink, report),
        Preset::Fig10 => fig10(cfg, sink, report),
    }
}

//! Execution of each subcommand on a resolved [`RunConfig`].

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use sinked_fp::bertalanffy::{map_fisher, map_laguerre, BRSpec, BrEvaluator, BrRegime};
use sinked_fp::density::{default_probes, density_grids, to_csv, DensityGrid, Evaluator, T_MIN};
use sinked_fp::models::{coefficients, validate, Family, ModelSpec};
use sinked_fp::oracles::fd::l2_relative;
use sinked_fp::oracles::{fd_solve, l1_distance, simulate_br, Crossing, FDConfig, Histogram, Initial, MCConfig, Stretch};
use sinked_fp::spectrum::{classify, discrete_count};

use crate::config::{CrossingKind, Format, GridSpec, Oracle, RunConfig, StretchKind, Target};
use crate::CliError;

/// Default pass thresholds of `compare`.
pub const FD_TOL: f64 = 1e-2;
pub const MC_TOL: f64 = 5e-2;

/// Summary text, plus an optional data artifact for `--out`. A primary artifact
/// replaces the summary on stdout when `--out` is absent.
pub struct Output {
    pub stdout: String,
    pub artifact: Option<Artifact>,
}

pub struct Artifact {
    pub data: String,
    /// Times present in a CSV artifact, for the plot script.
    pub times: Vec<f64>,
    pub ylabel: &'static str,
    /// Printed to stdout when no `--out` is given.
    pub primary: bool,
}

pub fn execute(cfg: &RunConfig) -> Result<Output, CliError> {
    use crate::config::Command::*;
    match cfg.command {
        Eval => eval(cfg),
        Classify => classify_cmd(cfg),
        Validate => validate_cmd(cfg),
        Compare => compare(cfg),
        Simulate => simulate(cfg),
        Mass => mass(cfg),
    }
}

fn target(cfg: &RunConfig) -> Result<Target, CliError> {
    cfg.target.ok_or_else(|| CliError::Usage(format!("{} needs --model", cfg.command_name())))
}

fn model_only(cfg: &RunConfig) -> Result<ModelSpec, CliError> {
    match target(cfg)? {
        Target::Model(m) => Ok(m),
        Target::Bertalanffy(_) => {
            Err(CliError::Usage(format!("{} needs a model family, not bertalanffy", cfg.command_name())))
        }
    }
}

fn br_only(cfg: &RunConfig) -> Result<BRSpec, CliError> {
    match target(cfg)? {
        Target::Bertalanffy(br) => Ok(br),
        Target::Model(_) => Err(CliError::Usage(format!("{} needs --model bertalanffy", cfg.command_name()))),
    }
}

fn times(cfg: &RunConfig) -> Result<&[f64], CliError> {
    if cfg.t.is_empty() {
        return Err(CliError::Usage(format!("{} needs --t", cfg.command_name())));
    }
    Ok(&cfg.t)
}

fn start(cfg: &RunConfig) -> Result<f64, CliError> {
    cfg.y.ok_or_else(|| CliError::Usage(format!("{} needs --y", cfg.command_name())))
}

fn grid(cfg: &RunConfig) -> Result<GridSpec, CliError> {
    cfg.grid.ok_or_else(|| CliError::Usage(format!("{} needs --x lo:hi:n", cfg.command_name())))
}

fn t_min(ts: &[f64]) -> f64 {
    ts.iter().cloned().fold(f64::INFINITY, f64::min)
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

fn grids_output(grids: &[DensityGrid], format: Format, ylabel: &'static str) -> Artifact {
    let data = match format {
        Format::Csv => to_csv(grids),
        Format::Json => json(&grids),
    };
    Artifact { data, times: grids.iter().map(|g| g.t).collect(), ylabel, primary: true }
}

fn br_grid(ev: &BrEvaluator, xs: &[f64], t: f64, y: f64) -> Result<DensityGrid, CliError> {
    let values: Vec<f64> = xs.iter().map(|&x| ev.eval(x, t)).collect::<sinked_fp::Result<_>>()?;
    let min_before_clamp = values.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(DensityGrid { x_nodes: xs.to_vec(), values, t, y, mass: ev.mass(t)?, model: None, min_before_clamp })
}

fn br_evaluator(br: &BRSpec, y: f64, ts: &[f64], cfg: &RunConfig) -> Result<BrEvaluator, CliError> {
    let probes = [0.5 * y, y, 2.0 * y];
    Ok(BrEvaluator::new(br, y, t_min(ts), &cfg.quadrature, &probes)?)
}

fn eval(cfg: &RunConfig) -> Result<Output, CliError> {
    let (ts, y, xs) = (times(cfg)?, start(cfg)?, grid(cfg)?.points());
    let grids = match target(cfg)? {
        Target::Model(m) => density_grids(&m, &xs, ts, y, &cfg.quadrature)?,
        Target::Bertalanffy(br) => {
            let ev = br_evaluator(&br, y, ts, cfg)?;
            ts.iter().map(|&t| br_grid(&ev, &xs, t, y)).collect::<Result<_, _>>()?
        }
    };
    let mut stdout = String::new();
    for g in &grids {
        let _ = writeln!(stdout, "t={:?} mass={:.10}", g.t, g.mass);
    }
    Ok(Output { stdout, artifact: Some(grids_output(&grids, cfg.format, "T(x,t|y)")) })
}

#[derive(Serialize)]
struct ClassifyReport {
    regime: Option<&'static str>,
    model: ModelSpec,
    #[serde(flatten)]
    spectrum: sinked_fp::spectrum::SpectrumDescriptor,
    discrete_count: Option<usize>,
}

fn classify_cmd(cfg: &RunConfig) -> Result<Output, CliError> {
    let (regime, m) = match target(cfg)? {
        Target::Model(m) => (None, m),
        Target::Bertalanffy(br) => match BrRegime::detect(&br)? {
            BrRegime::Laguerre => (Some("laguerre"), map_laguerre(&br)?.model()),
            BrRegime::Fisher => (Some("fisher-snedecor"), map_fisher(&br)?.model()),
        },
    };
    let spectrum = classify(&m)?;
    let count = discrete_count(&m);
    let stdout = match cfg.format {
        Format::Json => json(&ClassifyReport { regime, model: m, spectrum, discrete_count: count }),
        Format::Csv => {
            let lambda = spectrum.threshold.map_or("none".to_string(), |v| v.to_string());
            let discrete = count.map_or("inf".to_string(), |n| n.to_string());
            let prefix = regime.map_or(String::new(), |r| format!("regime={r} "));
            format!("{prefix}category={} Lambda={lambda} discrete={discrete}\n", spectrum.category)
        }
    };
    Ok(Output { stdout, artifact: None })
}

fn validate_cmd(cfg: &RunConfig) -> Result<Output, CliError> {
    match target(cfg)? {
        Target::Model(m) => validate(&m).into_result()?,
        Target::Bertalanffy(br) => match BrRegime::detect(&br)? {
            BrRegime::Laguerre => validate(&map_laguerre(&br)?.model()).into_result()?,
            BrRegime::Fisher => validate(&map_fisher(&br)?.model()).into_result()?,
        },
    }
    Ok(Output { stdout: "valid\n".into(), artifact: None })
}

#[derive(Serialize)]
struct MassRow {
    t: f64,
    mass: f64,
}

fn mass(cfg: &RunConfig) -> Result<Output, CliError> {
    let (ts, y) = (times(cfg)?, start(cfg)?);
    let rows: Vec<MassRow> = match target(cfg)? {
        Target::Model(m) => {
            let ev = Evaluator::new(&m, y, t_min(ts), &cfg.quadrature, &default_probes(&m, y))?;
            ts.iter().map(|&t| Ok(MassRow { t, mass: ev.mass(t)? })).collect::<sinked_fp::Result<_>>()?
        }
        Target::Bertalanffy(br) => {
            let ev = br_evaluator(&br, y, ts, cfg)?;
            ts.iter().map(|&t| Ok(MassRow { t, mass: ev.mass(t)? })).collect::<sinked_fp::Result<_>>()?
        }
    };
    let data = match cfg.format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut s = String::from("t,mass\n");
            for r in &rows {
                let _ = writeln!(s, "{:?},{:?}", r.t, r.mass);
            }
            s
        }
    };
    Ok(Output { stdout: String::new(), artifact: Some(Artifact { data, times: Vec::new(), ylabel: "mass", primary: true }) })
}

fn mc_config(cfg: &RunConfig) -> MCConfig {
    let mc = &cfg.mc;
    let mut c = MCConfig::new(mc.paths.unwrap_or(100_000), mc.dt.unwrap_or(1e-4), mc.seed.unwrap_or(1));
    c.crossing = match mc.crossing.unwrap_or(CrossingKind::Reflect) {
        CrossingKind::Reflect => Crossing::Reflect,
        CrossingKind::Absorb => Crossing::Absorb,
    };
    c
}

/// Histogram as a density grid over bin centres.
fn histogram_grid(h: &Histogram, t: f64, y: f64) -> DensityGrid {
    let (x_nodes, values): (Vec<f64>, Vec<f64>) = h.density().into_iter().unzip();
    let mass = h.counts.iter().sum::<u64>() as f64 / h.n_samples as f64;
    let min_before_clamp = values.iter().cloned().fold(f64::INFINITY, f64::min);
    DensityGrid { x_nodes, values, t, y, mass, model: None, min_before_clamp }
}

fn simulate(cfg: &RunConfig) -> Result<Output, CliError> {
    let (br, ts, y) = (br_only(cfg)?, times(cfg)?, start(cfg)?);
    br.check()?;
    let mc = mc_config(cfg);
    let mut stdout = String::new();
    let mut hists = Vec::new();
    for &t in ts {
        let h = simulate_br(&br, y, t, &mc)?;
        let _ = writeln!(stdout, "t={t:?} paths={} crossings={} bins={}", h.n_samples, h.blowups, h.counts.len());
        hists.push((t, h));
    }
    let artifact = match cfg.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Run<'a> {
                t: f64,
                histogram: &'a Histogram,
            }
            let runs: Vec<Run> = hists.iter().map(|(t, h)| Run { t: *t, histogram: h }).collect();
            Artifact { data: json(&runs), times: ts.to_vec(), ylabel: "density", primary: true }
        }
        Format::Csv => {
            let grids: Vec<DensityGrid> = hists.iter().map(|(t, h)| histogram_grid(h, *t, y)).collect();
            grids_output(&grids, Format::Csv, "density")
        }
    };
    Ok(Output { stdout, artifact: Some(artifact) })
}

fn compare(cfg: &RunConfig) -> Result<Output, CliError> {
    match cfg.oracle {
        Some(Oracle::Fd) => compare_fd(cfg),
        Some(Oracle::Mc) => compare_mc(cfg),
        None => Err(CliError::Usage("compare needs --oracle fd|mc".into())),
    }
}

/// Finite-difference grid for a model started at `y`, unless overridden.
fn fd_grid(m: &ModelSpec, y: f64, cfg: &RunConfig) -> FDConfig {
    let fd = &cfg.fd;
    let (lo, hi, n_x, stretch) = match m.kind {
        Family::Romanovski => (-1e3, 1e3, 2000, StretchKind::Sinh),
        Family::Bessel => ((-6.0f64).exp(), 8f64.exp(), 2000, StretchKind::Log),
        Family::Laguerre | Family::FisherSnedecor => ((-18.0f64).exp(), 10f64.exp(), 2400, StretchKind::Log),
    };
    let g = fd.grid.unwrap_or(GridSpec { lo, hi, n: n_x });
    let stretch = match fd.stretch.unwrap_or(stretch) {
        StretchKind::Uniform => Stretch::Uniform,
        StretchKind::Log => Stretch::Log,
        StretchKind::Sinh => Stretch::Sinh { center: if m.kind == Family::Romanovski { y } else { 0.0 }, scale: 1.0 },
    };
    FDConfig::new(g.lo, g.hi, g.n, fd.n_t.unwrap_or(600), stretch)
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn compare_fd(cfg: &RunConfig) -> Result<Output, CliError> {
    let (m, ts, y) = (model_only(cfg)?, times(cfg)?, start(cfg)?);
    let t0 = cfg.fd.t0.unwrap_or(T_MIN);
    let tol = cfg.tol.unwrap_or(FD_TOL);
    if ts.iter().any(|&t| t <= t0) || ts.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Usage(format!("compare times must increase and exceed t0 = {t0}")));
    }
    let fd = fd_grid(&m, y, cfg);
    let xs = fd.x_nodes();
    let ev = Evaluator::new(&m, y, t0, &cfg.quadrature, &default_probes(&m, y))?;
    let sample = |t: f64| -> sinked_fp::Result<Vec<f64>> {
        let mut v = Vec::with_capacity(xs.len());
        v.push(0.0);
        for &x in &xs[1..xs.len() - 1] {
            v.push(ev.eval(x, t)?);
        }
        v.push(0.0);
        Ok(v)
    };
    let coeffs = |x: f64| match coefficients(&m, x) {
        Ok(c) if m.in_support(x) => (c.s, c.q, c.r),
        _ => (1e-300, 0.0, 0.0),
    };
    let grids = fd_solve(&coeffs, y, ts, &fd, &Initial::Profile { t0, values: sample(t0)? })?;
    let mut stdout = String::new();
    let mut worst: f64 = 0.0;
    for g in &grids {
        let l2 = l2_relative(&xs, &g.values, &sample(g.t)?);
        worst = worst.max(l2);
        let _ = writeln!(stdout, "t={:?} L2={l2:.3e} tol={tol:e} {}", g.t, verdict(l2 < tol));
    }
    let artifact = Artifact { primary: false, ..grids_output(&grids, cfg.format, "T(x,t|y)") };
    if !(worst < tol) {
        return Err(CliError::Mismatch { stdout, detail: format!("L2 relative error {worst:.3e} >= {tol:e}") });
    }
    Ok(Output { stdout, artifact: Some(artifact) })
}

fn compare_mc(cfg: &RunConfig) -> Result<Output, CliError> {
    let (br, ts, y) = (br_only(cfg)?, times(cfg)?, start(cfg)?);
    br.check()?;
    let tol = cfg.tol.unwrap_or(MC_TOL);
    let mc = mc_config(cfg);
    let ev = br_evaluator(&br, y, ts, cfg)?;
    let mut stdout = String::new();
    let mut worst: f64 = 0.0;
    let mut grids = Vec::new();
    for &t in ts {
        let h = simulate_br(&br, y, t, &mc)?;
        let l1 = l1_distance(&h, &|x: f64| if x > 0.0 { ev.eval(x, t) } else { Ok(0.0) })?;
        worst = worst.max(l1);
        let _ = writeln!(stdout, "t={t:?} L1={l1:.4} tol={tol:e} crossings={} {}", h.blowups, verdict(l1 < tol));
        grids.push(histogram_grid(&h, t, y));
    }
    let artifact = Artifact { primary: false, ..grids_output(&grids, cfg.format, "density") };
    if !(worst < tol) {
        return Err(CliError::Mismatch { stdout, detail: format!("L1 distance {worst:.4} >= {tol:e}") });
    }
    Ok(Output { stdout, artifact: Some(artifact) })
}

/// Gnuplot script drawing one curve per time from a `x,t,density` CSV.
pub fn plot_script(csv: &Path, times: &[f64], ylabel: &str) -> String {
    let name = csv.file_name().map_or_else(|| csv.display().to_string(), |n| n.to_string_lossy().into_owned());
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set xlabel 'x'");
    let _ = writeln!(s, "set ylabel '{ylabel}'");
    let _ = writeln!(s, "set key top right");
    let curves: Vec<String> = times
        .iter()
        .map(|t| format!("'{name}' every ::1 using 1:($2=={t:?} ? $3 : 1/0) with lines title 't={t:?}'"))
        .collect();
    let _ = writeln!(s, "plot {}", curves.join(", \\\n     "));
    s
}

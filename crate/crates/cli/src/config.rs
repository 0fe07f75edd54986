//! Flag parsing, config-file merging and the resolved [`RunConfig`].

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sinked_fp::bertalanffy::BRSpec;
use sinked_fp::density::QuadratureSpec;
use sinked_fp::models::{Family, ModelSpec};

use crate::CliError;

#[derive(Parser, Debug)]
#[command(name = "sinked-fp", version, about = "Transition densities of sinked Fokker-Planck equations")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Sample densities on an x-grid at one or more times.
    #[command(args_override_self = true)]
    Eval(Flags),
    /// Print the spectral category, threshold and discrete count.
    #[command(args_override_self = true)]
    Classify(Flags),
    /// Check parameter restrictions.
    #[command(args_override_self = true)]
    Validate(Flags),
    /// Compare against the finite-difference or Monte-Carlo oracle.
    #[command(args_override_self = true)]
    Compare(Flags),
    /// Monte-Carlo histogram of the B-R process.
    #[command(args_override_self = true)]
    Simulate(Flags),
    /// Total probability at each time.
    #[command(args_override_self = true)]
    Mass(Flags),
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// laguerre, bessel, fisher-snedecor, romanovski or bertalanffy
    #[arg(long)]
    model: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    sigma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    sigma1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    sigma2: Option<f64>,
    /// B-R growth rate
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    /// B-R saturation rate
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    zeta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    /// x-grid as lo:hi:n (n points, ends included)
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// comma-separated times
    #[arg(long)]
    t: Option<String>,
    /// starting point
    #[arg(long, allow_negative_numbers = true)]
    y: Option<f64>,
    #[arg(long)]
    mu_max: Option<f64>,
    #[arg(long)]
    panels: Option<usize>,
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    quad_tol: Option<f64>,
    #[arg(long)]
    max_doublings: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// write a gnuplot script next to --out
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    plot: Option<bool>,
    /// key=value file; flags given on the command line win
    #[arg(long)]
    config: Option<PathBuf>,
    /// worker threads (falls back to SINKED_FP_THREADS)
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum)]
    oracle: Option<Oracle>,
    /// pass threshold for compare
    #[arg(long)]
    tol: Option<f64>,
    /// start time of the finite-difference run
    #[arg(long)]
    t0: Option<f64>,
    /// finite-difference grid as lo:hi:n
    #[arg(long, allow_hyphen_values = true)]
    fd_x: Option<String>,
    #[arg(long)]
    fd_nt: Option<usize>,
    #[arg(long, value_enum)]
    fd_stretch: Option<StretchKind>,
    #[arg(long)]
    paths: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    crossing: Option<CrossingKind>,
    /// print the resolved configuration as key=value lines and exit
    #[arg(long)]
    print_config: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Eval,
    Classify,
    Validate,
    Compare,
    Simulate,
    Mass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Oracle {
    Fd,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum StretchKind {
    Uniform,
    Log,
    Sinh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CrossingKind {
    Reflect,
    Absorb,
}

fn value_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

/// What the densities are computed for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Model(ModelSpec),
    Bertalanffy(BRSpec),
}

/// `n` equally spaced points from `lo` to `hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("grid '{s}' is not lo:hi:n"));
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts.as_slice() else { return Err(bad()) };
        let g = GridSpec {
            lo: lo.trim().parse().map_err(|_| bad())?,
            hi: hi.trim().parse().map_err(|_| bad())?,
            n: n.trim().parse().map_err(|_| bad())?,
        };
        if !(g.lo < g.hi) || g.n < 2 || !g.lo.is_finite() || !g.hi.is_finite() {
            return Err(CliError::Usage(format!("grid '{s}' needs lo < hi and n >= 2")));
        }
        Ok(g)
    }

    pub fn points(&self) -> Vec<f64> {
        let step = (self.hi - self.lo) / (self.n - 1) as f64;
        (0..self.n).map(|i| if i + 1 == self.n { self.hi } else { self.lo + i as f64 * step }).collect()
    }

    fn render(&self) -> String {
        format!("{:?}:{:?}:{}", self.lo, self.hi, self.n)
    }
}

/// Monte-Carlo settings; unset fields take command defaults.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct McSettings {
    pub paths: Option<usize>,
    pub dt: Option<f64>,
    pub seed: Option<u64>,
    pub crossing: Option<CrossingKind>,
}

/// Finite-difference settings; unset fields take per-family defaults.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FdSettings {
    pub grid: Option<GridSpec>,
    pub n_t: Option<usize>,
    pub stretch: Option<StretchKind>,
    pub t0: Option<f64>,
}

/// A fully parsed invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub target: Option<Target>,
    pub grid: Option<GridSpec>,
    pub t: Vec<f64>,
    pub y: Option<f64>,
    pub quadrature: QuadratureSpec,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub plot: bool,
    pub threads: Option<usize>,
    pub oracle: Option<Oracle>,
    pub tol: Option<f64>,
    pub fd: FdSettings,
    pub mc: McSettings,
}

/// Parsed command line: either a configuration to run, or to print.
#[derive(Debug, Clone, PartialEq)]
pub struct Invocation {
    pub config: RunConfig,
    pub print_config: bool,
}

/// Parses `argv` (program name first), merging a `--config` file under the flags.
pub fn parse_args(argv: &[String]) -> Result<Invocation, CliError> {
    let mut tokens = argv.to_vec();
    if let Some(path) = config_path(argv)? {
        // injected right after the subcommand, so later command-line flags override
        let extra = config_tokens(&path)?;
        let at = 2.min(tokens.len());
        tokens.splice(at..at, extra);
    }
    let cli = Cli::try_parse_from(&tokens).map_err(CliError::Clap)?;
    let (command, flags) = match cli.command {
        Sub::Eval(f) => (Command::Eval, f),
        Sub::Classify(f) => (Command::Classify, f),
        Sub::Validate(f) => (Command::Validate, f),
        Sub::Compare(f) => (Command::Compare, f),
        Sub::Simulate(f) => (Command::Simulate, f),
        Sub::Mass(f) => (Command::Mass, f),
    };
    let print_config = flags.print_config;
    Ok(Invocation { config: resolve(command, flags)?, print_config })
}

fn config_path(argv: &[String]) -> Result<Option<PathBuf>, CliError> {
    let mut found = None;
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--config" {
            let v = it.next().ok_or_else(|| CliError::Usage("--config needs a path".into()))?;
            found = Some(PathBuf::from(v));
        } else if let Some(v) = a.strip_prefix("--config=") {
            found = Some(PathBuf::from(v));
        }
    }
    Ok(found)
}

fn config_tokens(path: &Path) -> Result<Vec<String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("{}:{}: expected key=value", path.display(), i + 1)))?;
        let key = k.trim().replace('_', "-");
        if matches!(key.as_str(), "config" | "print-config") {
            return Err(CliError::Config(format!("{}:{}: '{key}' is not allowed here", path.display(), i + 1)));
        }
        out.push(format!("--{key}"));
        out.push(v.trim().to_string());
    }
    Ok(out)
}

fn parse_times(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad time '{p}' in --t"))))
        .collect()
}

fn resolve(command: Command, f: Flags) -> Result<RunConfig, CliError> {
    let need = |v: Option<f64>, name: &str, model: &str| {
        v.ok_or_else(|| CliError::Usage(format!("--{name} is required for {model}")))
    };
    let target = match f.model.as_deref() {
        None => None,
        Some(name) if matches!(name.to_ascii_lowercase().as_str(), "bertalanffy" | "br" | "bertalanffy-richards") => {
            let model = "bertalanffy";
            Some(Target::Bertalanffy(BRSpec {
                a: need(f.a, "a", model)?,
                b: f.b.unwrap_or(0.0),
                alpha: f.alpha.unwrap_or(0.0),
                beta: need(f.beta, "beta", model)?,
                zeta: need(f.zeta, "zeta", model)?,
                omega: f.omega.unwrap_or(1.0),
            }))
        }
        Some(name) => {
            let kind: Family = name.parse().map_err(|_| CliError::Usage(format!("unknown model '{name}'")))?;
            let model = kind.name();
            let gamma = need(f.gamma, "gamma", model)?;
            Some(Target::Model(match kind {
                Family::Laguerre => ModelSpec::laguerre(gamma, need(f.sigma, "sigma", model)?),
                Family::Bessel => ModelSpec::bessel(gamma, need(f.sigma, "sigma", model)?),
                Family::FisherSnedecor => ModelSpec::fisher_snedecor(
                    gamma,
                    need(f.sigma1, "sigma1", model)?,
                    need(f.sigma2, "sigma2", model)?,
                ),
                Family::Romanovski => {
                    ModelSpec::romanovski(gamma, need(f.sigma1, "sigma1", model)?, need(f.sigma2, "sigma2", model)?)
                }
            }))
        }
    };
    let base = QuadratureSpec::default();
    let quadrature = QuadratureSpec {
        mu_max: f.mu_max,
        panels: f.panels.unwrap_or(base.panels),
        nodes_per_panel: f.nodes.unwrap_or(base.nodes_per_panel),
        tol: f.quad_tol.unwrap_or(base.tol),
        max_doublings: f.max_doublings.unwrap_or(base.max_doublings),
    };
    if quadrature.panels == 0 || quadrature.nodes_per_panel == 0 {
        return Err(CliError::Usage("--panels and --nodes must be positive".into()));
    }
    Ok(RunConfig {
        command,
        target,
        grid: f.x.as_deref().map(GridSpec::parse).transpose()?,
        t: f.t.as_deref().map(parse_times).transpose()?.unwrap_or_default(),
        y: f.y,
        quadrature,
        out: f.out,
        format: f.format.unwrap_or_default(),
        plot: f.plot.unwrap_or(false),
        threads: f.threads,
        oracle: f.oracle,
        tol: f.tol,
        fd: FdSettings {
            grid: f.fd_x.as_deref().map(GridSpec::parse).transpose()?,
            n_t: f.fd_nt,
            stretch: f.fd_stretch,
            t0: f.t0,
        },
        mc: McSettings { paths: f.paths, dt: f.dt, seed: f.seed, crossing: f.crossing },
    })
}

impl RunConfig {
    /// `key=value` lines that reproduce this configuration when passed back with
    /// `--config` to the same subcommand.
    pub fn to_config_string(&self) -> String {
        let mut kv: Vec<(&str, String)> = Vec::new();
        let num = |v: f64| format!("{v:?}");
        match &self.target {
            Some(Target::Model(m)) => {
                kv.push(("model", m.kind.name().into()));
                kv.push(("gamma", num(m.gamma)));
                match m.kind {
                    Family::Laguerre | Family::Bessel => kv.push(("sigma", num(m.sigma))),
                    _ => {
                        kv.push(("sigma1", num(m.sigma1)));
                        kv.push(("sigma2", num(m.sigma2)));
                    }
                }
            }
            Some(Target::Bertalanffy(br)) => {
                kv.push(("model", "bertalanffy".into()));
                for (k, v) in [
                    ("a", br.a),
                    ("b", br.b),
                    ("alpha", br.alpha),
                    ("beta", br.beta),
                    ("zeta", br.zeta),
                    ("omega", br.omega),
                ] {
                    kv.push((k, num(v)));
                }
            }
            None => {}
        }
        if let Some(g) = &self.grid {
            kv.push(("x", g.render()));
        }
        if !self.t.is_empty() {
            kv.push(("t", self.t.iter().map(|&v| num(v)).collect::<Vec<_>>().join(",")));
        }
        if let Some(y) = self.y {
            kv.push(("y", num(y)));
        }
        let q = &self.quadrature;
        if let Some(mu) = q.mu_max {
            kv.push(("mu_max", num(mu)));
        }
        kv.push(("panels", q.panels.to_string()));
        kv.push(("nodes", q.nodes_per_panel.to_string()));
        kv.push(("quad_tol", num(q.tol)));
        kv.push(("max_doublings", q.max_doublings.to_string()));
        if let Some(p) = &self.out {
            kv.push(("out", p.display().to_string()));
        }
        kv.push(("format", value_name(&self.format)));
        kv.push(("plot", self.plot.to_string()));
        if let Some(n) = self.threads {
            kv.push(("threads", n.to_string()));
        }
        if let Some(o) = &self.oracle {
            kv.push(("oracle", value_name(o)));
        }
        if let Some(v) = self.tol {
            kv.push(("tol", num(v)));
        }
        if let Some(v) = self.fd.t0 {
            kv.push(("t0", num(v)));
        }
        if let Some(g) = &self.fd.grid {
            kv.push(("fd_x", g.render()));
        }
        if let Some(n) = self.fd.n_t {
            kv.push(("fd_nt", n.to_string()));
        }
        if let Some(s) = &self.fd.stretch {
            kv.push(("fd_stretch", value_name(s)));
        }
        if let Some(n) = self.mc.paths {
            kv.push(("paths", n.to_string()));
        }
        if let Some(v) = self.mc.dt {
            kv.push(("dt", num(v)));
        }
        if let Some(s) = self.mc.seed {
            kv.push(("seed", s.to_string()));
        }
        if let Some(c) = &self.mc.crossing {
            kv.push(("crossing", value_name(c)));
        }
        kv.into_iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    /// Subcommand name as typed on the command line.
    pub fn command_name(&self) -> &'static str {
        match self.command {
            Command::Eval => "eval",
            Command::Classify => "classify",
            Command::Validate => "validate",
            Command::Compare => "compare",
            Command::Simulate => "simulate",
            Command::Mass => "mass",
        }
    }
}

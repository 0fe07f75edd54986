//! Command-line front end for `sinked-fp`.
//!
//! [`run_with`] parses arguments, executes one subcommand and maps failures to
//! exit codes: 0 on success, 1 on domain errors (a single `ERROR:<code>: ...`
//! line on stderr), 2 on usage errors.

pub mod commands;
pub mod config;

use std::io::Write;

use thiserror::Error;

pub use config::{parse_args, GridSpec, Invocation, RunConfig, Target};

/// Environment variable consulted when `--threads` is absent.
pub const THREADS_ENV: &str = "SINKED_FP_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Domain(#[from] sinked_fp::Error),
    #[error("{0}")]
    Io(String),
    #[error("{detail}")]
    Mismatch { stdout: String, detail: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) if !e.use_stderr() => 0,
            CliError::Clap(_) | CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Domain(_) | CliError::Io(_) | CliError::Mismatch { .. } => 1,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Clap(_) | CliError::Usage(_) => "USAGE",
            CliError::Config(_) => "INVALID_CONFIG",
            CliError::Domain(e) => e.code(),
            CliError::Io(_) => "IO",
            CliError::Mismatch { .. } => "ORACLE_MISMATCH",
        }
    }
}

fn threads(cfg: &RunConfig) -> Result<Option<usize>, CliError> {
    if let Some(n) = cfg.threads {
        return Ok(Some(n));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV}='{v}' is not a thread count"))),
        _ => Ok(None),
    }
}

fn execute_in_pool(cfg: &RunConfig) -> Result<commands::Output, CliError> {
    match threads(cfg)? {
        Some(0) => Err(CliError::Usage("thread count must be positive".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
            pool.install(|| commands::execute(cfg))
        }
        None => commands::execute(cfg),
    }
}

fn write_file(path: &std::path::Path, data: &str) -> Result<(), CliError> {
    std::fs::write(path, data).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn run_inner(argv: &[String], out: &mut dyn Write) -> Result<(), CliError> {
    let inv = parse_args(argv)?;
    let cfg = &inv.config;
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    if inv.print_config {
        out.write_all(cfg.to_config_string().as_bytes()).map_err(io)?;
        return Ok(());
    }
    if cfg.plot && cfg.out.is_none() {
        return Err(CliError::Usage("--plot needs --out".into()));
    }
    let result = execute_in_pool(cfg)?;
    let data_on_stdout = cfg.out.is_none() && result.artifact.as_ref().is_some_and(|a| a.primary);
    if !data_on_stdout {
        out.write_all(result.stdout.as_bytes()).map_err(io)?;
    }
    if let Some(art) = result.artifact {
        match &cfg.out {
            Some(path) => {
                write_file(path, &art.data)?;
                writeln!(out, "wrote {}", path.display()).map_err(io)?;
                if cfg.plot {
                    let script = path.with_extension("gp");
                    write_file(&script, &commands::plot_script(path, &art.times, art.ylabel))?;
                    writeln!(out, "wrote {}", script.display()).map_err(io)?;
                }
            }
            None if art.primary => out.write_all(art.data.as_bytes()).map_err(io)?,
            None => {}
        }
    }
    Ok(())
}

/// Runs one invocation (`argv[0]` is the program name) and returns the exit code.
pub fn run_with(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match run_inner(argv, out) {
        Ok(()) => 0,
        Err(e) => {
            match &e {
                CliError::Clap(c) if !c.use_stderr() => {
                    let _ = write!(out, "{c}");
                }
                CliError::Clap(c) => {
                    let first = c.to_string().lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
                    let _ = writeln!(err, "ERROR:USAGE: {first}");
                    let _ = write!(err, "{}", c.render());
                }
                CliError::Mismatch { stdout, detail } => {
                    let _ = write!(out, "{stdout}");
                    let _ = writeln!(err, "ERROR:{}: {detail}", e.code());
                }
                _ => {
                    let _ = writeln!(err, "ERROR:{}: {e}", e.code());
                }
            }
            e.exit_code()
        }
    }
}

/// [`run_with`] on the process's stdout and stderr.
pub fn run(argv: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

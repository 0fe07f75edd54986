use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at {re}{im:+}i")]
    Pole { re: f64, im: f64 },
    #[error("{what}: no convergence after {terms} terms")]
    NoConvergence { what: &'static str, terms: usize },
    #[error("singular argument z = 1")]
    SingularArgument,
    #[error("x = {x} outside the support")]
    OutOfSupport { x: f64 },
    #[error("n = {n} outside the discrete spectrum")]
    OutOfSpectrum { n: usize },
    #[error("{0}")]
    InvalidModel(String),
    #[error("barred sink rbar = {0} is negative")]
    NegativeRbar(f64),
    #[error("mu = {0} hits a gamma-pole degeneracy")]
    DegenerateMu(f64),
    #[error("t = {t} below t_min = {t_min}; use the finite-difference oracle")]
    TimeTooSmall { t: f64, t_min: f64 },
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),
    #[error("wrong regime: {0}")]
    WrongRegime(String),
    #[error("invalid mapping: {0}")]
    InvalidMapping(String),
    #[error("stationary profile has no interior maximum")]
    NoInteriorMax,
    #[error("finite-difference instability: {0}")]
    InstabilityDetected(String),
    #[error("finite-difference domain too small: {0}")]
    DomainTooSmall(String),
    #[error("{count} of {total} paths blew up")]
    PathBlowup { count: usize, total: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// Stable machine-readable code used by the command-line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Pole { .. } | Error::DegenerateMu(_) => "DEGENERATE",
            Error::NoConvergence { .. } => "NO_CONVERGENCE",
            Error::SingularArgument => "SINGULAR_ARGUMENT",
            Error::OutOfSupport { .. } => "OUT_OF_SUPPORT",
            Error::OutOfSpectrum { .. } => "OUT_OF_SPECTRUM",
            Error::InvalidModel(_) | Error::NegativeRbar(_) => "INVALID_PARAM",
            Error::TimeTooSmall { .. } => "TIME_TOO_SMALL",
            Error::QuadratureFailure(_) => "QUADRATURE_FAILURE",
            Error::WrongRegime(_) => "WRONG_REGIME",
            Error::InvalidMapping(_) => "INVALID_MAPPING",
            Error::NoInteriorMax => "NO_INTERIOR_MAX",
            Error::InstabilityDetected(_) => "INSTABILITY",
            Error::DomainTooSmall(_) => "DOMAIN_TOO_SMALL",
            Error::PathBlowup { .. } => "PATH_BLOWUP",
            Error::InvalidConfig(_) => "INVALID_CONFIG",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

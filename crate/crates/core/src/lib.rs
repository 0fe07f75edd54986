//! Transition densities of sinked Fokker–Planck equations by spectral expansion.
//!
//! Four model families (Laguerre, Bessel, Fisher–Snedecor, Romanovski) with
//! discrete and continuous spectra, their application to the
//! Bertalanffy–Richards Langevin equation, and independent finite-difference and
//! Monte-Carlo references.

pub mod bertalanffy;
pub mod density;
pub mod eigen;
pub mod error;
pub mod models;
pub mod oracles;
pub mod quad;
pub mod specfun;
pub mod spectrum;

pub use bertalanffy::{BRSpec, BrEvaluator, BrRegime};
pub use density::{density, density_grids, total_mass, DensityGrid, Evaluator, QuadratureSpec};
pub use error::{Error, Result};
pub use models::{Family, ModelSpec};
pub use num_complex::Complex64 as ComplexScalar;
pub use oracles::{FDConfig, Histogram, MCConfig};
pub use spectrum::{Category, SpectrumDescriptor};

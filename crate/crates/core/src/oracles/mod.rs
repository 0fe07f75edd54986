//! Independent references for the spectral densities: a finite-difference solver of
//! the forward equation and a Monte-Carlo simulator of the B-R Langevin equation.

pub mod fd;
pub mod mc;

pub use fd::{fd_solve, FDConfig, Initial, Stretch};
pub use mc::{l1_distance, simulate_br, simulate_br_direct, simulate_br_samples, Binning, Crossing, Histogram, MCConfig};

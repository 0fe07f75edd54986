//! Special functions: complex log-gamma, Pochhammer symbols, Kummer and Tricomi
//! confluent functions, the Gauss function with analytic continuation, and `I_nu`.

mod bessel;
mod gamma;
mod hyper;

pub use bessel::{bessel_i, bessel_i_scaled, ln_bessel_i};
pub use gamma::{gamma, gamma_real, ln_gamma, ln_gamma_real, pochhammer, rgamma};
pub use hyper::{
    hyp1f1, hyp2f0_poly, hyp2f1, hyp2f1_auto, hyp2f1_branch, is_near_pole, tricomi_u, Approx,
    Hyp2f1Branch, UValue, R_SWITCH,
};

//! Spectral classification, discrete eigenvalues and normalizations, and the
//! continuum normalizations (scalar for Bessel and Fisher–Snedecor, a 2×2 matrix
//! for Romanovski).

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{liouville_z, potential_from_coefficients, validate, Family, ModelSpec};
use crate::specfun::{ln_gamma, ln_gamma_real};

/// Default number of Laguerre terms listed by [`classify`].
pub const DEFAULT_LAGUERRE_TERMS: usize = 200;
/// Quadrature nodes closer than this to a point where `2μ` is an integer are moved.
pub const MU_GUARD: f64 = 1e-4;

/// Spectral category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Category {
    /// Purely discrete.
    I,
    /// Discrete plus a continuum from one oscillatory boundary.
    II,
    /// Discrete plus a doubly degenerate continuum from two oscillatory boundaries.
    III,
}

impl std::fmt::Display for Category {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Category::I => "I",
            Category::II => "II",
            Category::III => "III",
        })
    }
}

/// One discrete eigenpair label: `(n, λ_n, ρ_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscreteLevel {
    pub n: usize,
    pub lambda: f64,
    pub rho: f64,
}

/// Category, discrete levels and continuum threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDescriptor {
    pub category: Category,
    pub discrete: Vec<DiscreteLevel>,
    /// Continuum threshold Λ; `None` for category I.
    pub threshold: Option<f64>,
}

/// Limiting behaviour of the Liouville problem at one endpoint of the support.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryLimit {
    /// The endpoint in `x`.
    pub x: f64,
    /// Whether `|z(x)| -> inf` at this endpoint.
    pub z_infinite: bool,
    /// `lim V`; `None` when the potential diverges to `+inf`.
    pub potential: Option<f64>,
    /// `lim z^2 (V - lim V)` when the potential limit is finite.
    pub excess: f64,
}

impl BoundaryLimit {
    /// Oscillatory above its threshold.
    pub fn oscillatory(&self) -> bool {
        self.z_infinite && self.potential.is_some() && self.excess > -0.25
    }
}

/// Closed-form limits of `z(x)` and `V(z)` at each endpoint.
pub fn boundary_limits(m: &ModelSpec) -> Vec<BoundaryLimit> {
    let (sg, s1) = (m.sigma, m.sigma1);
    match m.kind {
        Family::Laguerre => vec![
            // z = 2 sqrt(x) -> 0; V ~ c / z^2 at the finite end
            BoundaryLimit { x: 0.0, z_infinite: false, potential: None, excess: 0.0 },
            // V ~ z^2 / 16
            BoundaryLimit { x: f64::INFINITY, z_infinite: true, potential: None, excess: 0.0 },
        ],
        Family::Bessel => vec![
            // z = ln x -> -inf; V ~ e^{-2z} / 4 -> +inf
            BoundaryLimit { x: 0.0, z_infinite: true, potential: None, excess: 0.0 },
            // V - Λ = O(e^{-z}), so z^2 (V - Λ) -> 0
            BoundaryLimit {
                x: f64::INFINITY,
                z_infinite: true,
                potential: Some((0.5 * (sg + 1.0)).powi(2)),
                excess: 0.0,
            },
        ],
        Family::FisherSnedecor => vec![
            BoundaryLimit { x: 0.0, z_infinite: false, potential: None, excess: 0.0 },
            // V - Λ = O(e^{-z})
            BoundaryLimit {
                x: f64::INFINITY,
                z_infinite: true,
                potential: Some((s1 + 0.5).powi(2)),
                excess: 0.0,
            },
        ],
        Family::Romanovski => {
            // V - Λ = O(1 / cosh z) at both ends
            let lam = Some((s1 + 0.5).powi(2));
            vec![
                BoundaryLimit { x: f64::NEG_INFINITY, z_infinite: true, potential: lam, excess: 0.0 },
                BoundaryLimit { x: f64::INFINITY, z_infinite: true, potential: lam, excess: 0.0 },
            ]
        }
    }
}

/// Numeric cross-check of an infinite boundary's limits at `|x| = 1e6`.
fn probe(m: &ModelSpec, b: &BoundaryLimit) -> Result<()> {
    if !b.x.is_infinite() {
        return Ok(());
    }
    let x = 1e6_f64.copysign(b.x);
    let z = liouville_z(m, x)?;
    let v = potential_from_coefficients(m, x)?;
    let ok = match b.potential {
        None => v > 1e3,
        Some(lim) => {
            let close = (v - lim).abs() <= 1e-3 * (1.0 + lim.abs());
            let excess = z * z * (v - lim);
            close && (excess - b.excess).abs() < 0.05
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!(
            "boundary probe at x = {x} disagrees with closed-form limits (V = {v})"
        )))
    }
}

/// Classifies the spectrum from the boundary limits and lists the discrete levels.
pub fn classify(m: &ModelSpec) -> Result<SpectrumDescriptor> {
    validate(m).into_result()?;
    let limits = boundary_limits(m);
    for b in &limits {
        probe(m, b)?;
    }
    let osc: Vec<f64> = limits.iter().filter(|b| b.oscillatory()).filter_map(|b| b.potential).collect();
    let (category, threshold) = match osc.len() {
        0 => (Category::I, None),
        1 => (Category::II, Some(osc[0])),
        _ => (Category::III, Some(osc.iter().cloned().fold(f64::INFINITY, f64::min))),
    };
    Ok(SpectrumDescriptor { category, discrete: discrete_spectrum(m, DEFAULT_LAGUERRE_TERMS)?, threshold })
}

/// Number of square-integrable discrete states; `None` for Laguerre (infinitely many).
pub fn discrete_count(m: &ModelSpec) -> Option<usize> {
    let bound = match m.kind {
        Family::Laguerre => return None,
        Family::Bessel => -m.gamma - 0.5 * (m.sigma + 1.0),
        Family::FisherSnedecor | Family::Romanovski => -m.gamma - 0.5,
    };
    // n < bound, strictly
    Some(if bound <= 0.0 { 0 } else { bound.ceil() as usize })
}

/// Continuum threshold Λ for categories II and III.
pub fn threshold(m: &ModelSpec) -> Option<f64> {
    match m.kind {
        Family::Laguerre => None,
        Family::Bessel => Some((0.5 * (m.sigma + 1.0)).powi(2)),
        Family::FisherSnedecor | Family::Romanovski => Some((m.sigma1 + 0.5).powi(2)),
    }
}

fn ln_factorial(n: usize) -> f64 {
    ln_gamma_real(n as f64 + 1.0).map(|v| v.0).unwrap_or(0.0)
}

/// `λ_n` for a discrete level (no range check).
pub fn discrete_lambda(m: &ModelSpec, n: usize) -> f64 {
    let (g, sg, s1) = (m.gamma, m.sigma, m.sigma1);
    let nf = n as f64;
    match m.kind {
        Family::Laguerre => nf + g,
        Family::Bessel => -(g + nf) * (g + sg + nf + 1.0),
        Family::FisherSnedecor | Family::Romanovski => (s1 - g - nf) * (g + s1 + nf + 1.0),
    }
}

/// `ρ_n` for a discrete level (no range check).
pub fn discrete_rho(m: &ModelSpec, n: usize) -> Result<f64> {
    let (g, sg, s2) = (m.gamma, m.sigma, m.sigma2);
    let nf = n as f64;
    let lg = |x: f64| ln_gamma_real(x);
    let rho = match m.kind {
        Family::Laguerre => {
            let (l, s) = lg(nf + sg + 2.0 * g + 1.0)?;
            s * (ln_factorial(n) - l).exp()
        }
        Family::Bessel => {
            let (l, s) = lg(-nf - 2.0 * g - sg)?;
            (-2.0 * nf - 2.0 * g - sg - 1.0) * s * (-ln_factorial(n) - l).exp()
        }
        Family::FisherSnedecor => {
            let (a, sa) = lg(-nf - g + s2)?;
            let (b, sb) = lg(-nf - 2.0 * g)?;
            let (c, sc) = lg(1.0 + nf + g + s2)?;
            (-2.0 * nf - 1.0 - 2.0 * g) * sa * sb * sc * (a - ln_factorial(n) - b - c).exp()
        }
        Family::Romanovski => {
            let (a, sa) = lg(-nf - 2.0 * g)?;
            let mod2 = 2.0 * ln_gamma(C64::new(-nf - g, 0.5 * s2))?.re;
            let (b, sb) = lg(-2.0 * nf - 2.0 * g)?;
            let (c, sc) = lg(-2.0 * nf - 2.0 * g - 1.0)?;
            let ln_den = 2.0 * (nf + g + 1.0) * 2f64.ln() + PI.ln() + ln_factorial(n) + b + c;
            sa * sb * sc * (a + mod2 - ln_den).exp()
        }
    };
    Ok(rho)
}

/// Discrete levels; `laguerre_terms` caps the otherwise infinite Laguerre list.
pub fn discrete_spectrum(m: &ModelSpec, laguerre_terms: usize) -> Result<Vec<DiscreteLevel>> {
    validate(m).into_result()?;
    let count = discrete_count(m).unwrap_or(laguerre_terms);
    (0..count)
        .map(|n| Ok(DiscreteLevel { n, lambda: discrete_lambda(m, n), rho: discrete_rho(m, n)? }))
        .collect()
}

fn check_mu(mu: f64) -> Result<()> {
    if !(mu > 1e-12) || !mu.is_finite() {
        return Err(Error::DegenerateMu(mu));
    }
    Ok(())
}

/// Continuum normalization `ρ(μ)` for Bessel and Fisher–Snedecor.
pub fn continuous_norm(m: &ModelSpec, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    let g = m.gamma;
    let im = C64::new(0.0, mu);
    match m.kind {
        Family::Bessel => {
            let a = g + 0.5 * (m.sigma + 1.0);
            let num = 2.0 * ln_gamma(im + a)?.re;
            let den = 2.0 * ln_gamma(2.0 * im)?.re + (2.0 * PI).ln();
            Ok((num - den).exp())
        }
        Family::FisherSnedecor => Ok(1.0 / (2.0 * PI * fs_pi(m, mu)?.norm_sqr())),
        _ => Err(Error::WrongRegime(format!("continuous_norm is defined for Bessel and Fisher-Snedecor, not {}", m.kind.name()))),
    }
}

/// `Π(μ)` of the Fisher–Snedecor continuum.
pub fn fs_pi(m: &ModelSpec, mu: f64) -> Result<C64> {
    let (g, s2) = (m.gamma, m.sigma2);
    let im = C64::new(0.0, mu);
    let l = ln_gamma(C64::new(g + 1.0 + s2, 0.0))? + ln_gamma(-2.0 * im)?
        - ln_gamma(-im + g + 0.5)?
        - ln_gamma(-im + 0.5 + s2)?;
    Ok(l.exp())
}

/// `Γ̃(μ)` of the Romanovski continuum.
pub fn romanovski_gamma_tilde(m: &ModelSpec, mu: f64) -> Result<C64> {
    let (g, s2) = (m.gamma, m.sigma2);
    let im = C64::new(0.0, mu);
    let hs = C64::new(0.0, 0.5 * s2);
    let l = ln_gamma(hs + g + 1.0)? + ln_gamma(-2.0 * im)? - ln_gamma(-im + g + 0.5)? - ln_gamma(hs - im + 0.5)?;
    Ok(l.exp())
}

/// The Romanovski continuum matrices `Λ_ij(μ)` and `ρ_ij(μ) = (Λ^{-1})_ij`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RomanovskiNorm {
    pub lambda11: C64,
    pub lambda12: f64,
    pub rho11: C64,
    pub rho12: f64,
}

impl RomanovskiNorm {
    pub fn lambda22(&self) -> C64 {
        self.lambda11.conj()
    }
    pub fn lambda21(&self) -> f64 {
        self.lambda12
    }
    pub fn rho22(&self) -> C64 {
        self.rho11.conj()
    }
    pub fn rho21(&self) -> f64 {
        self.rho12
    }
    /// `|Λ11|^2 - Λ12^2`.
    pub fn determinant(&self) -> f64 {
        self.lambda11.norm_sqr() - self.lambda12 * self.lambda12
    }
}

/// `Λ_ij(μ)` in closed form and its inverse.
pub fn romanovski_norm(m: &ModelSpec, mu: f64) -> Result<RomanovskiNorm> {
    if m.kind != Family::Romanovski {
        return Err(Error::WrongRegime(format!("romanovski_norm called for {}", m.kind.name())));
    }
    check_mu(mu)?;
    let (g, s2) = (m.gamma, m.sigma2);
    let gp = romanovski_gamma_tilde(m, mu)?;
    let gm = romanovski_gamma_tilde(m, -mu)?;
    let ch = (C64::new(s2, -(2.0 * g + 1.0)) * (0.5 * PI)).cosh();
    let lambda11 = gp * gm * ch * (2f64.powf(2.0 * g + 3.0) * PI);
    let lambda12 = 2f64.powf(2.0 * g + 2.0)
        * PI
        * (gp.norm_sqr() * (0.5 * PI * (s2 + 2.0 * mu)).cosh()
            + gm.norm_sqr() * (0.5 * PI * (s2 - 2.0 * mu)).cosh());
    let det = lambda11.norm_sqr() - lambda12 * lambda12;
    if det == 0.0 || !det.is_finite() {
        return Err(Error::DegenerateMu(mu));
    }
    Ok(RomanovskiNorm { lambda11, lambda12, rho11: lambda11.conj() / det, rho12: -lambda12 / det })
}

/// Moves `mu` off the points `2μ ∈ Z` by at least [`MU_GUARD`].
pub fn guard_mu(mu: f64) -> f64 {
    let k = (2.0 * mu).round();
    let d = 2.0 * mu - k;
    if d.abs() >= MU_GUARD {
        return mu;
    }
    let shifted = if d >= 0.0 { k + MU_GUARD } else { k - MU_GUARD };
    0.5 * shifted.max(MU_GUARD)
}

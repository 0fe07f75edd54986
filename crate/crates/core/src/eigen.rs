//! Discrete and continuum eigenfunctions, including the `s(x)^ϰ` prefactor.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{Family, ModelSpec};
use crate::spectrum::{discrete_count, fs_pi};
use crate::specfun::{hyp2f0_poly, hyp2f1_branch, pochhammer, tricomi_u, Hyp2f1Branch, R_SWITCH};

/// Which representation produced a continuum value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// Power series about the origin of the hypergeometric argument.
    Direct,
    /// A connection or re-expansion valid away from the origin.
    Continued,
}

/// A continuum eigenfunction value with its provenance and relative error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenfunctionValue {
    pub value: C64,
    pub branch_used: Branch,
    pub err: f64,
}

/// Romanovski continuum index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RomIndex {
    One,
    Two,
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `ln s(x)^ϰ`.
pub fn ln_prefactor(m: &ModelSpec, x: f64) -> f64 {
    let k = m.varkappa();
    if k == 0.0 {
        return 0.0;
    }
    match m.kind {
        Family::Laguerre => k * x.ln(),
        Family::Bessel => 2.0 * k * x.ln(),
        Family::FisherSnedecor => k * (x.ln() + x.ln_1p()),
        Family::Romanovski => k * x.mul_add(x, 1.0).ln(),
    }
}

fn check(m: &ModelSpec, x: f64) -> Result<()> {
    if m.in_support(x) && x.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfSupport { x })
    }
}

/// Generalized Laguerre `L_n^{(alpha)}(x)` by the three-term recurrence.
pub fn laguerre_poly(n: usize, alpha: f64, x: f64) -> f64 {
    let mut p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let mut p1 = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0 + alpha - x) * p1 - (kf + alpha) * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// The polynomial factor `ϑ_n / s^ϰ` of a discrete eigenfunction.
pub fn discrete_poly(m: &ModelSpec, n: usize, x: f64) -> Result<f64> {
    let (g, sg, s2) = (m.gamma, m.sigma, m.sigma2);
    let nf = n as f64;
    Ok(match m.kind {
        Family::Laguerre => laguerre_poly(n, sg + 2.0 * g, x),
        Family::Bessel => hyp2f0_poly(n, c(2.0 * g + sg + nf + 1.0, 0.0), x).re,
        Family::FisherSnedecor => {
            let cc = c(g + s2 + 1.0, 0.0);
            let f = hyp2f1_branch(Hyp2f1Branch::Gauss, c(-nf, 0.0), c(2.0 * g + nf + 1.0, 0.0), cc, c(-x, 0.0))?;
            (pochhammer(cc, n) * f.value).re
        }
        Family::Romanovski => {
            let cc = c(g + 1.0, 0.5 * s2);
            let z = c(0.5, -0.5 * x);
            let f = hyp2f1_branch(Hyp2f1Branch::Gauss, c(-nf, 0.0), c(2.0 * g + nf + 1.0, 0.0), cc, z)?;
            let lead = c(0.0, -2.0).powu(n as u32) * pochhammer(cc, n) / pochhammer(c(nf + 2.0 * g + 1.0, 0.0), n);
            (lead * f.value).re
        }
    })
}

/// Discrete eigenfunction `ϑ_n(x)`.
pub fn discrete_eig(m: &ModelSpec, n: usize, x: f64) -> Result<f64> {
    if let Some(count) = discrete_count(m) {
        if n >= count {
            return Err(Error::OutOfSpectrum { n });
        }
    }
    check(m, x)?;
    Ok(ln_prefactor(m, x).exp() * discrete_poly(m, n, x)?)
}

// ------------------------------------------------------------------ Bessel

/// `ψ_B(μ, x) = u^a U(a, 1 + 2iμ, u)` with `u = 1/x`, `a = γ + (σ+1)/2 + iμ`.
pub fn psi_bessel(m: &ModelSpec, mu: f64, x: f64) -> Result<EigenfunctionValue> {
    let a = c(m.gamma + 0.5 * (m.sigma + 1.0), mu);
    let u = 1.0 / x;
    let r = tricomi_u(a, c(1.0, 2.0 * mu), u)?;
    let value = (a * u.ln()).exp() * r.value;
    Ok(EigenfunctionValue { value, branch_used: Branch::Continued, err: r.err })
}

/// Bessel continuum eigenfunction `x^γ ψ_B(μ, x)`.
pub fn continuous_eig_bessel(m: &ModelSpec, mu: f64, x: f64) -> Result<EigenfunctionValue> {
    if m.kind != Family::Bessel {
        return Err(Error::WrongRegime("continuous_eig_bessel needs a Bessel model".into()));
    }
    check(m, x)?;
    let mut v = psi_bessel(m, mu, x)?;
    v.value *= ln_prefactor(m, x).exp();
    Ok(v)
}

// ------------------------------------------------------------------ Fisher–Snedecor

/// `ψ_F(μ, x) = 2F1(γ+1/2+iμ, γ+1/2-iμ; γ+1+σ2; -x)` through the requested branch.
///
/// `Direct` is the Pfaff series in `x/(1+x)`; `Continued` is the `Π(μ)` connection,
/// a series in `1/(1+x)`.
pub fn psi_fs_branch(m: &ModelSpec, mu: f64, x: f64, branch: Branch) -> Result<EigenfunctionValue> {
    let (g, s2) = (m.gamma, m.sigma2);
    let a = c(g + 0.5, mu);
    let cc = c(g + 1.0 + s2, 0.0);
    let (value, err) = match branch {
        Branch::Direct => {
            let r = hyp2f1_branch(Hyp2f1Branch::Pfaff, a, a.conj(), cc, c(-x, 0.0))?;
            (r.value, r.err)
        }
        Branch::Continued => {
            // Γ(c)Γ(b-a)/(Γ(b)Γ(c-a)) with b = conj(a) is exactly Π(μ).
            let w = 1.0 / (1.0 + x);
            let s = hyp2f1_branch(Hyp2f1Branch::Gauss, a, cc - a.conj(), c(1.0, 2.0 * mu), c(w, 0.0))?;
            let term = fs_pi(m, mu)? * (-a * (1.0 + x).ln()).exp() * s.value;
            let v = 2.0 * term.re;
            let err = s.err * term.norm() / v.abs().max(f64::MIN_POSITIVE);
            (c(v, 0.0), err)
        }
    };
    Ok(EigenfunctionValue { value, branch_used: branch, err })
}

/// `ψ_F` with the branch chosen by `x` (split at `x = 1`) and a fallback on poor conditioning.
pub fn psi_fs(m: &ModelSpec, mu: f64, x: f64) -> Result<EigenfunctionValue> {
    let (first, second) = if x <= 1.0 { (Branch::Direct, Branch::Continued) } else { (Branch::Continued, Branch::Direct) };
    let v = psi_fs_branch(m, mu, x, first);
    match v {
        Ok(v) if v.err < 1e-12 => Ok(v),
        _ => {
            let w = psi_fs_branch(m, mu, x, second);
            match (v, w) {
                (Ok(v), Ok(w)) => Ok(if w.err < v.err { w } else { v }),
                (Ok(v), Err(_)) => Ok(v),
                (Err(_), Ok(w)) => Ok(w),
                (Err(e), Err(_)) => Err(e),
            }
        }
    }
}

/// Fisher–Snedecor continuum eigenfunction `(x^2+x)^ϰ ψ_F(μ, x)`.
pub fn continuous_eig_fs(m: &ModelSpec, mu: f64, x: f64) -> Result<EigenfunctionValue> {
    if m.kind != Family::FisherSnedecor {
        return Err(Error::WrongRegime("continuous_eig_fs needs a Fisher-Snedecor model".into()));
    }
    check(m, x)?;
    let mut v = psi_fs(m, mu, x)?;
    v.value *= ln_prefactor(m, x).exp();
    Ok(v)
}

// ------------------------------------------------------------------ Romanovski

/// `|x|` below which `χ1` uses the Gauss series (`|(1 - ix)/2| <= R_SWITCH`).
pub fn romanovski_switch() -> f64 {
    (4.0 * R_SWITCH * R_SWITCH - 1.0).sqrt()
}

/// `χ1(μ, x) = 2F1(γ+1/2+iμ, γ+1/2-iμ; γ+1+iσ2/2; (1-ix)/2)` through the requested branch.
///
/// `Direct` is the Gauss series; `Continued` is the expansion about argument `1/2`
/// in powers of `2i/x`, convergent for `|x| > 1`.
pub fn chi1_branch(m: &ModelSpec, mu: f64, x: f64, branch: Branch) -> Result<EigenfunctionValue> {
    let (g, s2) = (m.gamma, m.sigma2);
    let a = c(g + 0.5, mu);
    let cc = c(g + 1.0, 0.5 * s2);
    let z = c(0.5, -0.5 * x);
    let br = match branch {
        Branch::Direct => Hyp2f1Branch::Gauss,
        Branch::Continued => Hyp2f1Branch::Buhring,
    };
    let r = hyp2f1_branch(br, a, a.conj(), cc, z)?;
    Ok(EigenfunctionValue { value: r.value, branch_used: branch, err: r.err })
}

/// `χ̃(μ, x) = ((ix-1)/2)^{-γ-1/2-iμ} 2F1(γ+1/2+iμ, 1/2-iσ2/2+iμ; 1+2iμ; 2/(1-ix))`,
/// with the principal branch of the power; convergent for `|x| > 1`.
pub fn chi_tilde(m: &ModelSpec, mu: f64, x: f64) -> Result<C64> {
    let (g, s2) = (m.gamma, m.sigma2);
    let a = c(g + 0.5, mu);
    let w = c(1.0, -x).inv() * 2.0;
    let f = hyp2f1_branch(Hyp2f1Branch::Gauss, a, c(0.5, mu - 0.5 * s2), c(1.0, 2.0 * mu), w)?;
    Ok((-a * c(-0.5, 0.5 * x).ln()).exp() * f.value)
}

/// `χ1 = Γ̃(μ) χ̃(μ, x) + Γ̃(-μ) χ̃(-μ, x)`, the connection about infinity.
pub fn chi1_connection(m: &ModelSpec, mu: f64, x: f64) -> Result<C64> {
    use crate::spectrum::romanovski_gamma_tilde as gt;
    Ok(gt(m, mu)? * chi_tilde(m, mu, x)? + gt(m, -mu)? * chi_tilde(m, -mu, x)?)
}

/// `χ1` with the branch chosen by `|x|`.
pub fn chi1(m: &ModelSpec, mu: f64, x: f64) -> Result<EigenfunctionValue> {
    let branch = if x.abs() <= romanovski_switch() { Branch::Direct } else { Branch::Continued };
    chi1_branch(m, mu, x, branch)
}

/// Romanovski continuum eigenfunction `(x^2+1)^ϰ χ_i(μ, x)`, with `χ2 = conj(χ1)`.
pub fn continuous_eig_rom(m: &ModelSpec, i: RomIndex, mu: f64, x: f64) -> Result<EigenfunctionValue> {
    if m.kind != Family::Romanovski {
        return Err(Error::WrongRegime("continuous_eig_rom needs a Romanovski model".into()));
    }
    check(m, x)?;
    let mut v = chi1(m, mu, x)?;
    v.value *= ln_prefactor(m, x).exp();
    if i == RomIndex::Two {
        v.value = v.value.conj();
    }
    Ok(v)
}

/// Continuum eigenvalue `Λ + μ^2`.
pub fn continuum_lambda(m: &ModelSpec, mu: f64) -> Option<f64> {
    crate::spectrum::threshold(m).map(|l| l + mu * mu)
}

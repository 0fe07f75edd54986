//! Stochastic Bertalanffy–Richards growth: parameter maps onto the Laguerre and
//! Fisher–Snedecor models and transition densities in the original coordinate.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{mu_nodes, Evaluator, QuadratureSpec, T_MIN};
use crate::eigen::{discrete_poly, psi_fs};
use crate::error::{Error, Result};
use crate::models::{validate, ModelSpec};
use crate::quad::{pairwise_sum, tanh_sinh_par};
use crate::specfun::ln_bessel_i;
use crate::spectrum::{continuous_norm, discrete_count, discrete_rho};

/// Sign of `n (n + 2σ1 + 1) τ` in the discrete exponent of the Fisher–Snedecor
/// B-R density. With `+1` the exponent equals `-λ_n τ` at `γ = σ1`, so every
/// square-integrable level decays.
pub const FISHER_DISCRETE_EXPONENT_SIGN: f64 = 1.0;

/// Parameters of `dx = (a x - b x^ζ) dt + sqrt(Ω) (α x dW1 - β x^ζ dW2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BRSpec {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub beta: f64,
    pub zeta: f64,
    pub omega: f64,
}

impl BRSpec {
    /// The parameter set of the Fisher–Snedecor example figure.
    pub fn figure5() -> Self {
        BRSpec { a: 4.2, b: 0.0, alpha: 0.9, beta: 0.4, zeta: 3.2, omega: 1.0 }
    }

    pub fn check(&self) -> Result<()> {
        let finite = [self.a, self.b, self.alpha, self.beta, self.zeta, self.omega].iter().all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidModel("B-R parameters must be finite".into()));
        }
        if !(self.zeta > 1.0) {
            return Err(Error::InvalidModel("zeta > 1 required".into()));
        }
        if self.a < 0.0 || self.b < 0.0 {
            return Err(Error::InvalidModel("a >= 0 and b >= 0 required".into()));
        }
        if !(self.omega > 0.0) {
            return Err(Error::InvalidModel("Omega > 0 required".into()));
        }
        Ok(())
    }

    /// `z = x^{2(1-ζ)} / ω`.
    pub fn z_of(&self, x: f64, omega_map: f64) -> f64 {
        (2.0 * (1.0 - self.zeta) * x.ln()).exp() / omega_map
    }

    /// `ln |dz/dx|` for `z = x^{2(1-ζ)} / ω`.
    pub fn ln_jacobian(&self, x: f64, omega_map: f64) -> f64 {
        (2.0 * (self.zeta - 1.0)).ln() + (1.0 - 2.0 * self.zeta) * x.ln() - omega_map.ln()
    }
}

/// Constants of the Laguerre reduction (`α = b = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaguerreMap {
    pub sigma: f64,
    pub omega_l: f64,
    /// `τ / t`
    pub time_scale: f64,
}

impl LaguerreMap {
    pub fn model(&self) -> ModelSpec {
        ModelSpec::laguerre(0.0, self.sigma)
    }
}

/// Constants of the Fisher–Snedecor reduction (`b = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherMap {
    pub sigma1: f64,
    pub sigma2: f64,
    pub omega_f: f64,
    /// `τ / t`
    pub time_scale: f64,
}

impl FisherMap {
    /// The sink-free model `γ = σ1`.
    pub fn model(&self) -> ModelSpec {
        ModelSpec::fisher_snedecor(self.sigma1, self.sigma1, self.sigma2)
    }
}

pub fn map_laguerre(br: &BRSpec) -> Result<LaguerreMap> {
    br.check()?;
    if br.alpha != 0.0 || br.b != 0.0 || !(br.a > 0.0) || br.beta == 0.0 {
        return Err(Error::WrongRegime("the Laguerre reduction needs alpha = 0, b = 0, a > 0, beta != 0".into()));
    }
    let z1 = br.zeta - 1.0;
    let sigma = 1.0 / (2.0 * z1);
    Ok(LaguerreMap { sigma, omega_l: br.omega * z1 * br.beta * br.beta / br.a, time_scale: br.a / sigma })
}

/// The Fisher–Snedecor constants without validating the induced model.
pub fn fisher_constants(br: &BRSpec) -> Result<FisherMap> {
    br.check()?;
    if br.b != 0.0 || br.alpha == 0.0 || br.beta == 0.0 || !(br.a > 0.0) {
        return Err(Error::WrongRegime("the Fisher-Snedecor reduction needs b = 0, alpha != 0, beta != 0, a > 0".into()));
    }
    let z1 = br.zeta - 1.0;
    let oa2 = br.omega * br.alpha * br.alpha;
    let sigma1 = (oa2 * (br.zeta - 0.5) - br.a) / (2.0 * oa2 * z1) - 1.0;
    let sigma2 = (oa2 * (br.zeta - 0.5) + br.a) / (2.0 * oa2 * z1);
    let map = FisherMap {
        sigma1,
        sigma2,
        omega_f: br.beta * br.beta / (br.alpha * br.alpha),
        time_scale: 2.0 * z1 * br.a / (sigma2 - sigma1 - 1.0),
    };
    Ok(map)
}

pub fn map_fisher(br: &BRSpec) -> Result<FisherMap> {
    let map = fisher_constants(br)?;
    let report = validate(&map.model());
    if let Some(v) = report.violations.first() {
        return Err(Error::InvalidMapping(v.message.clone()));
    }
    Ok(map)
}

fn check_point(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfSupport { x })
    }
}

/// Closed-form density of the Laguerre reduction in the original coordinate.
pub fn br_density_laguerre(br: &BRSpec, x: f64, t: f64, y: f64) -> Result<f64> {
    let map = map_laguerre(br)?;
    check_point(x)?;
    check_point(y)?;
    if !(t > 0.0) {
        return Err(Error::TimeTooSmall { t, t_min: 0.0 });
    }
    let (sg, w) = (map.sigma, map.omega_l);
    let at = br.a * t;
    let one_minus = -(-at / sg).exp_m1();
    let (lx, ly) = (x.ln(), y.ln());
    let expo = -((-lx / sg).exp() + (-at / sg - ly / sg).exp()) / (w * one_minus);
    let arg = 2.0 * (-(lx + ly) / (2.0 * sg) - at / (2.0 * sg)).exp() / (w * one_minus);
    let ln_den = sg.ln() + w.ln() + (1.5 + 1.0 / sg) * lx - 0.5 * ly - 0.5 * at + one_minus.ln();
    Ok((expo + ln_bessel_i(sg, arg) - ln_den).exp())
}

/// Which reduction a B-R parameter set is evaluated through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BrRegime {
    Laguerre,
    Fisher,
}

impl BrRegime {
    /// Picks the reduction implied by the parameters.
    pub fn detect(br: &BRSpec) -> Result<Self> {
        if br.b != 0.0 {
            return Err(Error::WrongRegime("only b = 0 reductions have hypergeometric densities".into()));
        }
        Ok(if br.alpha == 0.0 { BrRegime::Laguerre } else { BrRegime::Fisher })
    }
}

/// Model, `ω` and `τ/t` of a reduction.
pub fn reduction(br: &BRSpec, regime: BrRegime) -> Result<(ModelSpec, f64, f64)> {
    Ok(match regime {
        BrRegime::Laguerre => {
            let m = map_laguerre(br)?;
            (m.model(), m.omega_l, m.time_scale)
        }
        BrRegime::Fisher => {
            let m = map_fisher(br)?;
            (m.model(), m.omega_f, m.time_scale)
        }
    })
}

/// The B-R density as the reduced model's density at `z(x)` times `|dz/dx|`.
pub fn br_density_chain(br: &BRSpec, regime: BrRegime, x: f64, t: f64, y: f64, q: &QuadratureSpec) -> Result<f64> {
    let (m, w, ts) = reduction(br, regime)?;
    check_point(x)?;
    check_point(y)?;
    let (z, zy) = (br.z_of(x, w), br.z_of(y, w));
    let d = Evaluator::new(&m, zy, ts * t, q, &[z])?.eval(z, ts * t)?;
    Ok(d * br.ln_jacobian(x, w).exp())
}

/// Precomputed Fisher–Snedecor B-R density for a fixed source `y`, valid for `t >= t_ref`.
#[derive(Debug, Clone)]
pub struct BrFisher {
    br: BRSpec,
    map: FisherMap,
    t_ref: f64,
    /// `(n (n + 2σ1 + 1), ρ_n F_n(z'))`
    discrete: Vec<(f64, f64)>,
    /// `(μ, (σ1 + 1/2)^2 + μ^2, w ρ(μ) ψ_F(μ, z'))`
    continuum: Vec<(f64, f64, f64)>,
}

impl BrFisher {
    fn build(br: &BRSpec, y: f64, t_ref: f64, q: &QuadratureSpec, panels: usize) -> Result<Self> {
        let map = map_fisher(br)?;
        check_point(y)?;
        if !(t_ref * map.time_scale >= T_MIN) {
            return Err(Error::TimeTooSmall { t: t_ref, t_min: T_MIN / map.time_scale });
        }
        let m = map.model();
        let zy = br.z_of(y, map.omega_f);
        let s1 = map.sigma1;
        let discrete = (0..discrete_count(&m).unwrap_or(0))
            .map(|n| {
                let nf = n as f64;
                Ok((nf * (nf + 2.0 * s1 + 1.0), discrete_rho(&m, n)? * discrete_poly(&m, n, zy)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let tau_ref = t_ref * map.time_scale;
        let continuum = mu_nodes(q.mu_max_for(tau_ref), panels, q.nodes_per_panel)
            .into_par_iter()
            .map(|(mu, w)| {
                let lam = (s1 + 0.5).powi(2) + mu * mu;
                Ok((mu, lam, w * continuous_norm(&m, mu)? * psi_fs(&m, mu, zy)?.value.re))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BrFisher { br: *br, map, t_ref, discrete, continuum })
    }

    /// Builds with μ-panel doubling until values at `probes` settle.
    pub fn new(br: &BRSpec, y: f64, t_ref: f64, q: &QuadratureSpec, probes: &[f64]) -> Result<Self> {
        let mut probes = probes.to_vec();
        probes.push(y);
        let mut panels = q.panels.max(1);
        let mut cur = Self::build(br, y, t_ref, q, panels)?;
        let mut prev: Vec<f64> = probes.iter().map(|&x| cur.eval(x, t_ref)).collect::<Result<_>>()?;
        for _ in 0..q.max_doublings {
            panels *= 2;
            let next_k = Self::build(br, y, t_ref, q, panels)?;
            let next: Vec<f64> = probes.iter().map(|&x| next_k.eval(x, t_ref)).collect::<Result<_>>()?;
            let peak = next.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
            let diff = prev.iter().zip(&next).fold(0.0_f64, |a, (p, n)| a.max((p - n).abs()));
            cur = next_k;
            prev = next;
            if diff <= q.tol * peak {
                return Ok(cur);
            }
        }
        Err(Error::QuadratureFailure(format!("continuum integral not converged with {panels} panels")))
    }

    pub fn map(&self) -> &FisherMap {
        &self.map
    }

    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        check_point(x)?;
        if t < self.t_ref {
            return Err(Error::TimeTooSmall { t, t_min: self.t_ref });
        }
        let (br, mp) = (&self.br, &self.map);
        let m = mp.model();
        let tau = mp.time_scale * t;
        let lx = x.ln();
        let v = (2.0 * (1.0 - br.zeta) * lx).exp();
        let z = v / mp.omega_f;
        let ln_front = (2.0 * (br.zeta - 1.0)).ln() + (mp.sigma1 - mp.sigma2) * (v + mp.omega_f).ln()
            - (2.0 * mp.sigma1 + 1.0) * mp.omega_f.ln()
            - 2.0 * br.zeta * lx;
        let mut parts = Vec::with_capacity(self.discrete.len() + self.continuum.len());
        for (n, &(e, c)) in self.discrete.iter().enumerate() {
            parts.push((FISHER_DISCRETE_EXPONENT_SIGN * e * tau).exp() * c * discrete_poly(&m, n, z)?);
        }
        for &(mu, lam, c) in &self.continuum {
            let damp = (-lam * tau).exp();
            if damp == 0.0 {
                continue;
            }
            parts.push(damp * c * psi_fs(&m, mu, z)?.value.re);
        }
        Ok(ln_front.exp() * pairwise_sum(&parts))
    }
}

/// Density of the Fisher–Snedecor reduction in the original coordinate.
pub fn br_density_fisher(br: &BRSpec, x: f64, t: f64, y: f64, q: &QuadratureSpec) -> Result<f64> {
    BrFisher::new(br, y, t, q, &[x])?.eval(x, t)
}

/// Evaluator for either reduction in the original coordinate.
#[derive(Debug, Clone)]
pub enum BrEvaluator {
    Laguerre { br: BRSpec, y: f64 },
    Fisher(BrFisher),
}

impl BrEvaluator {
    pub fn new(br: &BRSpec, y: f64, t_ref: f64, q: &QuadratureSpec, probes: &[f64]) -> Result<Self> {
        Ok(match BrRegime::detect(br)? {
            BrRegime::Laguerre => {
                map_laguerre(br)?;
                check_point(y)?;
                BrEvaluator::Laguerre { br: *br, y }
            }
            BrRegime::Fisher => BrEvaluator::Fisher(BrFisher::new(br, y, t_ref, q, probes)?),
        })
    }

    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        match self {
            BrEvaluator::Laguerre { br, y } => br_density_laguerre(br, x, t, *y),
            BrEvaluator::Fisher(f) => f.eval(x, t),
        }
    }

    /// `∫_0^∞ T(x, t | y) dx` with `x = u / (1 - u)`.
    pub fn mass(&self, t: f64) -> Result<f64> {
        let r = tanh_sinh_par(0.0, 1.0, 1e-10, 5, &|u: f64| {
            let w = 1.0 - u;
            let x = u / w;
            if !(x > 0.0) || !x.is_finite() {
                return Ok(0.0);
            }
            Ok(self.eval(x, t)? / (w * w))
        })?;
        if r.error > 1e-7 {
            return Err(Error::QuadratureFailure(format!("mass integral error estimate {:.2e}", r.error)));
        }
        Ok(r.value)
    }
}

/// Location of the maximum of the stationary density in `x`, found numerically.
pub fn steady_state_peak(br: &BRSpec) -> Result<f64> {
    let mp = map_fisher(br)?;
    let (zeta, w) = (br.zeta, mp.omega_f);
    let ln_p = |lx: f64| (mp.sigma1 - mp.sigma2) * ((2.0 * (1.0 - zeta) * lx).exp() + w).ln() - 2.0 * zeta * lx;
    let (lo, hi, n) = (-30.0_f64, 30.0_f64, 6000usize);
    let step = (hi - lo) / n as f64;
    let (mut best_i, mut best) = (0usize, f64::NEG_INFINITY);
    for i in 0..=n {
        let v = ln_p(lo + i as f64 * step);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    if best_i == 0 || best_i == n {
        return Err(Error::NoInteriorMax);
    }
    // golden-section refinement on the bracketing cells
    let (mut a, mut b) = (lo + (best_i - 1) as f64 * step, lo + (best_i + 1) as f64 * step);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    while b - a > 1e-13 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if ln_p(c) > ln_p(d) {
            b = d;
        } else {
            a = c;
        }
    }
    Ok((0.5 * (a + b)).exp())
}

//! Transition densities `T(x,t|y)`: discrete sums, continuum quadrature over μ,
//! the Laguerre closed form, and mass integrals.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::{chi1, discrete_poly, ln_prefactor, psi_bessel, psi_fs};
use crate::error::{Error, Result};
use crate::models::{ln_weight, validate, Family, ModelSpec};
use crate::quad::{pairwise_sum, tanh_sinh_par, GaussLegendre};
use crate::specfun::ln_bessel_i;
use crate::spectrum::{
    continuous_norm, discrete_count, discrete_lambda, discrete_rho, guard_mu, romanovski_norm, threshold,
    DEFAULT_LAGUERRE_TERMS, MU_GUARD,
};

/// Smallest time accepted by the spectral (continuum) path.
pub const T_MIN: f64 = 0.01;
/// The continuum is truncated at `μ² t = MU_TAIL`, where `e^{-μ² t} < 1e-16`.
pub const MU_TAIL: f64 = 37.0;
/// Negative values above `-CLAMP_TOL` are clamped to zero in grids.
pub const CLAMP_TOL: f64 = 1e-8;

/// Gauss–Legendre panelling of `[0, mu_max]` for the continuum integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// `None` picks `sqrt(MU_TAIL / t)` for the smallest requested `t`.
    pub mu_max: Option<f64>,
    pub panels: usize,
    pub nodes_per_panel: usize,
    /// Refinement stops when doubling the panels changes values by less than this
    /// (relative to `max(1, peak)`).
    pub tol: f64,
    pub max_doublings: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { mu_max: None, panels: 16, nodes_per_panel: 32, tol: 1e-8, max_doublings: 3 }
    }
}

impl QuadratureSpec {
    /// Upper μ limit used for times `t >= t_ref`.
    pub fn mu_max_for(&self, t_ref: f64) -> f64 {
        self.mu_max.unwrap_or_else(|| (MU_TAIL / t_ref).sqrt())
    }
}

/// A sampled density on an x-grid at fixed `t` and `y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityGrid {
    pub x_nodes: Vec<f64>,
    pub values: Vec<f64>,
    pub t: f64,
    pub y: f64,
    /// `∫ T dx` over the whole support (not just the grid).
    pub mass: f64,
    /// `None` for grids from arbitrary coefficient functions.
    pub model: Option<ModelSpec>,
    /// Smallest value before clamping of round-off negatives.
    pub min_before_clamp: f64,
}

/// Writes `x,t,density` rows (LF line endings, shortest round-trip floats).
pub fn to_csv(grids: &[DensityGrid]) -> String {
    use std::fmt::Write;
    let mut out = String::from("x,t,density\n");
    for g in grids {
        for (x, v) in g.x_nodes.iter().zip(&g.values) {
            let _ = writeln!(out, "{x:?},{:?},{v:?}", g.t);
        }
    }
    out
}

fn check_time(m: &ModelSpec, t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::TimeTooSmall { t, t_min: T_MIN });
    }
    if m.kind != Family::Laguerre && t < T_MIN {
        return Err(Error::TimeTooSmall { t, t_min: T_MIN });
    }
    Ok(())
}

fn check_point(m: &ModelSpec, x: f64) -> Result<()> {
    if m.in_support(x) && x.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfSupport { x })
    }
}

/// Laguerre density through the Hille–Hardy formula, evaluated in log form.
pub fn laguerre_closed_form(m: &ModelSpec, x: f64, t: f64, y: f64) -> Result<f64> {
    if m.kind != Family::Laguerre {
        return Err(Error::WrongRegime("laguerre_closed_form needs a Laguerre model".into()));
    }
    validate(m).into_result()?;
    check_point(m, x)?;
    check_point(m, y)?;
    if !(t > 0.0) {
        return Err(Error::TimeTooSmall { t, t_min: 0.0 });
    }
    let sg = m.sigma;
    let nu = sg + 2.0 * m.gamma;
    let one_minus = -(-t).exp_m1();
    let r = (-t).exp();
    let arg = 2.0 * (x * y * r).sqrt() / one_minus;
    let ln_t = 0.5 * sg * (x / y).ln() + 0.5 * sg * t - (x + y * r) / one_minus - one_minus.ln() + ln_bessel_i(nu, arg);
    Ok(ln_t.exp())
}

/// Laguerre density by its truncated eigenfunction series.
pub fn laguerre_series(m: &ModelSpec, x: f64, t: f64, y: f64, n_terms: usize) -> Result<f64> {
    if m.kind != Family::Laguerre {
        return Err(Error::WrongRegime("laguerre_series needs a Laguerre model".into()));
    }
    check_time(m, t)?;
    let k = Kernel::discrete_only(m, y, n_terms)?;
    k.eval(x, t)
}

#[derive(Debug, Clone)]
struct DiscreteTerm {
    lambda: f64,
    /// `ρ_n P_n(y)`
    coef: f64,
}

#[derive(Debug, Clone)]
struct ContinuumNode {
    mu: f64,
    lambda: f64,
    /// Weight times the `y`-dependent factor; the node contributes `factor * Re[coef ψ(μ,x)]`.
    coef: C64,
}

/// Spectral data for fixed model and source point `y`, valid for `t >= t_ref`.
#[derive(Debug, Clone)]
pub struct Kernel {
    model: ModelSpec,
    y: f64,
    t_ref: f64,
    ln_pre_y: f64,
    discrete: Vec<DiscreteTerm>,
    continuum: Vec<ContinuumNode>,
}

/// Gauss–Legendre nodes on `[0, mu_max]`, with `mu_max` nudged so no node sits within
/// the degeneracy guard.
pub(crate) fn mu_nodes(mu_max: f64, panels: usize, per_panel: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(per_panel);
    let mut top = mu_max;
    loop {
        let width = top / panels as f64;
        let nodes: Vec<(f64, f64)> =
            (0..panels).flat_map(|p| rule.mapped(p as f64 * width, (p + 1) as f64 * width).collect::<Vec<_>>()).collect();
        if nodes.iter().all(|&(mu, _)| guard_mu(mu) == mu && mu > MU_GUARD) {
            return nodes;
        }
        top *= 1.0 + 1e-3;
    }
}

impl Kernel {
    fn discrete_only(m: &ModelSpec, y: f64, n_terms: usize) -> Result<Self> {
        validate(m).into_result()?;
        check_point(m, y)?;
        let count = discrete_count(m).unwrap_or(n_terms);
        let discrete = (0..count)
            .map(|n| Ok(DiscreteTerm { lambda: discrete_lambda(m, n), coef: discrete_rho(m, n)? * discrete_poly(m, n, y)? }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Kernel { model: *m, y, t_ref: 0.0, ln_pre_y: ln_prefactor(m, y), discrete, continuum: Vec::new() })
    }

    /// Builds the kernel with `panels × nodes_per_panel` μ-nodes up to `q.mu_max_for(t_ref)`.
    pub fn build(m: &ModelSpec, y: f64, t_ref: f64, q: &QuadratureSpec, panels: usize) -> Result<Self> {
        check_time(m, t_ref)?;
        let mut k = Self::discrete_only(m, y, DEFAULT_LAGUERRE_TERMS)?;
        k.t_ref = t_ref;
        let Some(lam0) = threshold(m) else {
            return Ok(k);
        };
        let nodes = mu_nodes(q.mu_max_for(t_ref), panels, q.nodes_per_panel);
        k.continuum = nodes
            .par_iter()
            .map(|&(mu, w)| {
                let coef = match m.kind {
                    Family::Bessel => C64::from(w * continuous_norm(m, mu)? * psi_bessel(m, mu, y)?.value.re),
                    Family::FisherSnedecor => C64::from(w * continuous_norm(m, mu)? * psi_fs(m, mu, y)?.value.re),
                    Family::Romanovski => {
                        let r = romanovski_norm(m, mu)?;
                        let cy = chi1(m, mu, y)?.value;
                        (r.rho11 * cy + r.rho12 * cy.conj()) * (2.0 * w)
                    }
                    Family::Laguerre => unreachable!(),
                };
                Ok(ContinuumNode { mu, lambda: lam0 + mu * mu, coef })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(k)
    }

    pub fn model(&self) -> &ModelSpec {
        &self.model
    }

    /// Number of continuum nodes.
    pub fn nodes(&self) -> usize {
        self.continuum.len()
    }

    /// `T(x, t | y)`.
    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        let m = &self.model;
        check_point(m, x)?;
        if t < self.t_ref {
            return Err(Error::TimeTooSmall { t, t_min: self.t_ref });
        }
        // e^{-1/x} underflows long before the continuum functions become unreliable
        if m.kind == Family::Bessel && x < 1.0 / 600.0 {
            return Ok(0.0);
        }
        let ln_front = ln_weight(m, x)? + ln_prefactor(m, x) + self.ln_pre_y;
        if ln_front < -700.0 {
            return Ok(0.0);
        }
        let mut parts = Vec::with_capacity(self.discrete.len() + self.continuum.len());
        for (n, d) in self.discrete.iter().enumerate() {
            let damp = (-d.lambda * t).exp();
            let term = damp * d.coef * discrete_poly(m, n, x)?;
            parts.push(term);
            // Laguerre: stop once the damped terms are negligible.
            if m.kind == Family::Laguerre && n > 4 && term.abs() < 1e-17 * pairwise_sum(&parts).abs() && damp < 1e-3 {
                break;
            }
        }
        for node in &self.continuum {
            let damp = (-node.lambda * t).exp();
            if damp == 0.0 {
                continue;
            }
            let psi = match m.kind {
                Family::Bessel => psi_bessel(m, node.mu, x)?.value,
                Family::FisherSnedecor => psi_fs(m, node.mu, x)?.value,
                Family::Romanovski => chi1(m, node.mu, x)?.value,
                Family::Laguerre => unreachable!(),
            };
            parts.push(damp * (node.coef * psi).re);
        }
        Ok(ln_front.exp() * pairwise_sum(&parts))
    }
}

/// Evaluates densities for one model and source point, refining the μ-quadrature
/// by panel doubling on a set of probe points.
#[derive(Debug, Clone)]
pub enum Evaluator {
    LaguerreClosed { model: ModelSpec, y: f64 },
    Spectral(Kernel),
}

impl Evaluator {
    /// Prepares an evaluator valid for all `t >= t_ref`; `probes` are the x-values
    /// used to check μ-quadrature convergence.
    pub fn new(m: &ModelSpec, y: f64, t_ref: f64, q: &QuadratureSpec, probes: &[f64]) -> Result<Self> {
        validate(m).into_result()?;
        check_point(m, y)?;
        check_time(m, t_ref)?;
        if m.kind == Family::Laguerre {
            return Ok(Evaluator::LaguerreClosed { model: *m, y });
        }
        let mut probes: Vec<f64> = probes.iter().copied().filter(|&x| m.in_support(x)).collect();
        probes.push(y);
        let eval_all = |k: &Kernel| -> Result<Vec<f64>> { probes.par_iter().map(|&x| k.eval(x, t_ref)).collect() };
        let mut panels = q.panels.max(1);
        let mut coarse = Kernel::build(m, y, t_ref, q, panels)?;
        let mut prev = eval_all(&coarse)?;
        for _ in 0..q.max_doublings {
            panels *= 2;
            let fine = Kernel::build(m, y, t_ref, q, panels)?;
            let next = eval_all(&fine)?;
            let peak = next.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
            let diff = prev.iter().zip(&next).fold(0.0_f64, |a, (p, n)| a.max((p - n).abs()));
            coarse = fine;
            prev = next;
            if diff <= q.tol * peak {
                return Ok(Evaluator::Spectral(coarse));
            }
        }
        Err(Error::QuadratureFailure(format!("continuum integral not converged with {panels} panels")))
    }

    pub fn model(&self) -> &ModelSpec {
        match self {
            Evaluator::LaguerreClosed { model, .. } => model,
            Evaluator::Spectral(k) => k.model(),
        }
    }

    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        match self {
            Evaluator::LaguerreClosed { model, y } => laguerre_closed_form(model, x, t, *y),
            Evaluator::Spectral(k) => k.eval(x, t),
        }
    }

    /// `∫ T(x, t | y) dx` over the support, by tanh-sinh in a compactified variable.
    pub fn mass(&self, t: f64) -> Result<f64> {
        let m = *self.model();
        let tol = 1e-10;
        let r = match m.kind {
            Family::Romanovski => {
                let h = std::f64::consts::FRAC_PI_2;
                tanh_sinh_par(-h, h, tol, 5, &|v: f64| {
                    let c = v.cos();
                    Ok(self.eval(v.tan(), t)? / (c * c))
                })?
            }
            _ => tanh_sinh_par(0.0, 1.0, tol, 5, &|u: f64| {
                let w = 1.0 - u;
                let x = u / w;
                if !x.is_finite() || x <= 0.0 {
                    return Ok(0.0);
                }
                Ok(self.eval(x, t)? / (w * w))
            })?,
        };
        if r.error > 1e-7 || !r.value.is_finite() {
            return Err(Error::QuadratureFailure(format!("mass integral error estimate {:.2e}", r.error)));
        }
        Ok(r.value)
    }

    /// Samples the density on `xs` (in parallel, order preserved) and integrates the mass.
    pub fn grid(&self, xs: &[f64], t: f64) -> Result<DensityGrid> {
        let raw: Vec<f64> = xs.par_iter().map(|&x| self.eval(x, t)).collect::<Result<_>>()?;
        let min_before_clamp = raw.iter().cloned().fold(f64::INFINITY, f64::min);
        let values = raw.into_iter().map(|v| if v < 0.0 && v > -CLAMP_TOL { 0.0 } else { v }).collect();
        let (y, model) = match self {
            Evaluator::LaguerreClosed { model, y } => (*y, *model),
            Evaluator::Spectral(k) => (k.y, k.model),
        };
        Ok(DensityGrid { x_nodes: xs.to_vec(), values, t, y, mass: self.mass(t)?, model: Some(model), min_before_clamp })
    }
}

/// `T(x, t | y)`; Laguerre models use the closed form.
pub fn density(m: &ModelSpec, x: f64, t: f64, y: f64, q: &QuadratureSpec) -> Result<f64> {
    check_point(m, x)?;
    Evaluator::new(m, y, t, q, &[x])?.eval(x, t)
}

/// `∫ T(x, t | y) dx` over the support.
pub fn total_mass(m: &ModelSpec, t: f64, y: f64, q: &QuadratureSpec) -> Result<f64> {
    Evaluator::new(m, y, t, q, &default_probes(m, y))?.mass(t)
}

/// Probe points around `y` for quadrature refinement.
pub fn default_probes(m: &ModelSpec, y: f64) -> Vec<f64> {
    let spread = [0.25, 0.5, 0.8, 1.25, 2.0, 4.0];
    match m.kind {
        Family::Romanovski => spread.iter().flat_map(|&s| [y + s, y - s]).collect(),
        _ => spread.iter().map(|&s| y * s).collect(),
    }
}

/// Samples `T(·, t, y)` on `xs` for each time in `ts`, sharing one evaluator.
pub fn density_grids(m: &ModelSpec, xs: &[f64], ts: &[f64], y: f64, q: &QuadratureSpec) -> Result<Vec<DensityGrid>> {
    for &x in xs {
        check_point(m, x)?;
    }
    let t_ref = ts.iter().cloned().fold(f64::INFINITY, f64::min);
    let stride = (xs.len() / 16).max(1);
    let mut probes: Vec<f64> = xs.iter().step_by(stride).copied().collect();
    probes.extend(default_probes(m, y));
    let ev = Evaluator::new(m, y, t_ref, q, &probes)?;
    ts.iter().map(|&t| ev.grid(xs, t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::weight;

    #[test]
    fn closed_form_matches_series() {
        let m = ModelSpec::laguerre(0.5, 1.0);
        let c = laguerre_closed_form(&m, 1.3, 0.8, 0.7).unwrap();
        let s = laguerre_series(&m, 1.3, 0.8, 0.7, 150).unwrap();
        assert!((c - s).abs() < 1e-8, "{c} {s}");
    }

    #[test]
    fn laguerre_large_time_is_stationary() {
        let m = ModelSpec::laguerre(0.0, 1.5);
        let g = crate::specfun::gamma_real(2.5).unwrap();
        for x in [0.3, 1.0, 4.0] {
            let d = laguerre_closed_form(&m, x, 30.0, 1.2).unwrap();
            assert!((d - weight(&m, x).unwrap() / g).abs() < 1e-6);
        }
    }

    #[test]
    fn laguerre_mass_conserved() {
        let m = ModelSpec::laguerre(0.0, 0.0);
        for t in [0.1, 1.0, 10.0] {
            let mass = total_mass(&m, t, 1.0, &QuadratureSpec::default()).unwrap();
            assert!((mass - 1.0).abs() < 1e-6, "{t}: {mass}");
        }
    }

    #[test]
    fn small_time_is_rejected() {
        let m = ModelSpec::bessel(0.0, -4.0);
        assert!(matches!(density(&m, 1.0, 0.005, 1.0, &QuadratureSpec::default()), Err(Error::TimeTooSmall { .. })));
    }

    #[test]
    fn spectral_densities_are_symmetric() {
        let q = QuadratureSpec::default();
        for m in [
            ModelSpec::bessel(0.0, -4.0),
            ModelSpec::fisher_snedecor(-1.2, -2.0, 2.5),
            ModelSpec::romanovski(-0.6, -2.7, 2.1),
        ] {
            let (x, y, t) = (0.7, 1.4, 0.3);
            let a = density(&m, x, t, y, &q).unwrap() * weight(&m, y).unwrap();
            let b = density(&m, y, t, x, &q).unwrap() * weight(&m, x).unwrap();
            assert!((a - b).abs() < 1e-8 * a.abs().max(b.abs()), "{m:?}: {a} {b}");
        }
    }
}

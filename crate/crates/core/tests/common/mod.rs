#![allow(dead_code)]

use sinked_fp::models::{coefficients, ln_weight, Family, ModelSpec};
use sinked_fp::quad::{pairwise_sum, GaussLegendre};
use sinked_fp::ComplexScalar as C64;

/// Relative residual of `s f'' + q f' - r f = -λ f` with 7-point stencils,
/// `h = max(1e-4, 1e-3 |x|)`, Richardson-extrapolated once.
pub fn eigen_residual(m: &ModelSpec, f: &dyn Fn(f64) -> C64, lambda: f64, x: f64) -> f64 {
    let h = (1e-3 * x.abs()).max(1e-4);
    let derivs = |h: f64| {
        let v: Vec<C64> = (-3..=3).map(|k| f(x + k as f64 * h)).collect();
        let d1 = (-v[0] + v[1] * 9.0 - v[2] * 45.0 + v[4] * 45.0 - v[5] * 9.0 + v[6]) / (60.0 * h);
        let d2 = (v[0] * 2.0 - v[1] * 27.0 + v[2] * 270.0 - v[3] * 490.0 + v[4] * 270.0 - v[5] * 27.0 + v[6] * 2.0)
            / (180.0 * h * h);
        (d1, d2)
    };
    let (a1, a2) = derivs(h);
    let (b1, b2) = derivs(2.0 * h);
    let d1 = (a1 * 64.0 - b1) / 63.0;
    let d2 = (a2 * 64.0 - b2) / 63.0;
    let c = coefficients(m, x).unwrap();
    let v = f(x);
    let res = d2 * c.s + d1 * c.q - v * c.r + v * lambda;
    let scale = (d2 * c.s).norm() + (d1 * c.q).norm() + (v * c.r).norm() + (v * lambda).norm();
    if scale == 0.0 {
        return 0.0;
    }
    res.norm() / scale
}

/// `∫ W(x) f(x) dx` in a logarithmic variable (`x = e^s`, or `x = sinh s` on the
/// real line), for integrands with slowly decaying, log-oscillating tails.
///
/// `f(x, h)` receives `h = sqrt(W dx/ds)` and must apply it to each of its two
/// factors, so that neither overflows at large `x`.
pub fn weighted_integral_log(m: &ModelSpec, f: &dyn Fn(f64, f64) -> f64) -> f64 {
    let gl = GaussLegendre::new(20);
    let (lo, hi, map): (f64, f64, fn(f64) -> (f64, f64)) = match m.kind {
        Family::Romanovski => (-200.0, 200.0, |s| (s.sinh(), s.cosh())),
        _ => (-60.0, 200.0, |s| (s.exp(), s.exp())),
    };
    let panels = ((hi - lo) / 0.5) as usize;
    let parts: Vec<f64> = (0..panels)
        .map(|k| {
            let a = lo + k as f64 * 0.5;
            gl.integrate(a, a + 0.5, |s| {
                let (x, dx) = map(s);
                match ln_weight(m, x) {
                    Ok(lw) if lw > -1400.0 => f(x, (0.5 * (lw + dx.ln())).exp()),
                    _ => 0.0,
                }
            })
        })
        .collect();
    pairwise_sum(&parts)
}

/// Model parameter sets used across the suites.
pub fn bessel_sets() -> Vec<ModelSpec> {
    vec![ModelSpec::bessel(0.0, -4.0), ModelSpec::bessel(0.5, -6.0), ModelSpec::bessel(1.0, -5.0)]
}

pub fn fs_sets() -> Vec<ModelSpec> {
    vec![
        ModelSpec::fisher_snedecor(-1.2, -2.0, 2.5),
        ModelSpec::fisher_snedecor(-1.5648, -1.5648, 1.7921),
        ModelSpec::fisher_snedecor(-2.6, -3.5, 4.0),
    ]
}

pub fn romanovski_sets() -> Vec<ModelSpec> {
    vec![
        ModelSpec::romanovski(-0.6, -2.7, 2.1),
        ModelSpec::romanovski(-2.7, -2.7, 2.1),
        ModelSpec::romanovski(-1.8, -3.1, -0.7),
    ]
}

pub fn laguerre_sets() -> Vec<ModelSpec> {
    vec![ModelSpec::laguerre(0.0, 0.0), ModelSpec::laguerre(0.5, 1.0), ModelSpec::laguerre(1.2, -0.8)]
}

//! Gauss–Legendre rules, adaptive panel integration and pairwise summation.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// An `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on `P_n`, weights from `P_n'`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Integral of `f` over `[a, b]`.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let h = 0.5 * (b - a);
        let c = 0.5 * (b + a);
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(c + h * x);
        }
        s * h
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = 0.5 * (b - a);
        let c = 0.5 * (b + a);
        self.nodes.iter().zip(&self.weights).map(move |(x, w)| (c + h * x, w * h))
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn gl20() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(20))
}

/// Pairwise (cascade) summation; the order of operations is fixed by the slice layout.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

/// Adaptive integration over `[a, b]` starting from `panels` equal panels.
///
/// Interior panels use a 20-point Gauss rule with bisection; the two end panels use
/// tanh-sinh so that integrable endpoint singularities converge. Converged when the
/// total absolute error estimate is below `abs_tol`; panels that reach the depth
/// limit are accepted and their error is reported.
pub fn adaptive(
    a: f64,
    b: f64,
    panels: usize,
    abs_tol: f64,
    f: &impl Fn(f64) -> f64,
) -> Integral {
    let rule = gl20();
    let panels = panels.max(2);
    let width = (b - a) / panels as f64;
    let tol = abs_tol / panels as f64;
    let mut parts = Vec::with_capacity(panels);
    let mut err = 0.0;
    for i in 0..panels {
        let lo = a + i as f64 * width;
        let hi = if i + 1 == panels { b } else { lo + width };
        let r = if i == 0 || i + 1 == panels {
            tanh_sinh(lo, hi, tol, f)
        } else {
            let whole = rule.integrate(lo, hi, f);
            refine(rule, lo, hi, whole, tol, 0, f)
        };
        parts.push(r.value);
        err += r.error;
    }
    Integral { value: pairwise_sum(&parts), error: err }
}

fn refine(
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: usize,
    f: &impl Fn(f64) -> f64,
) -> Integral {
    let m = 0.5 * (a + b);
    let left = rule.integrate(a, m, f);
    let right = rule.integrate(m, b, f);
    let diff = (left + right - whole).abs();
    if diff <= tol || depth >= 40 || !(diff.is_finite()) {
        return Integral { value: left + right, error: diff };
    }
    let l = refine(rule, a, m, left, 0.5 * tol, depth + 1, f);
    let r = refine(rule, m, b, right, 0.5 * tol, depth + 1, f);
    Integral { value: l.value + r.value, error: l.error + r.error }
}

/// Tanh-sinh quadrature on `[a, b]`; the integrand is never evaluated at the ends.
pub fn tanh_sinh(a: f64, b: f64, abs_tol: f64, f: &impl Fn(f64) -> f64) -> Integral {
    const T_MAX: f64 = 3.5;
    let h = 0.5 * (b - a);
    let half_pi = std::f64::consts::FRAC_PI_2;
    // Contribution of the node at parameter t (and its mirror -t).
    let node = |t: f64| -> f64 {
        let u = half_pi * t.sinh();
        let w = half_pi * t.cosh() / (u.cosh() * u.cosh());
        // distance from the nearer endpoint, h (1 - tanh|u|), without cancellation
        let d = h * 2.0 / (1.0 + (2.0 * u.abs()).exp());
        if d <= 0.0 {
            return 0.0;
        }
        let (xl, xr) = (a + d, b - d);
        let mut s = 0.0;
        if xl > a && xl < b {
            s += f(xl);
        }
        if t != 0.0 && xr > a && xr < b {
            s += f(xr);
        }
        s * w * h
    };
    let mut step = 1.0;
    let mut sum = node(0.0);
    let mut k = 1;
    while k as f64 * step <= T_MAX {
        sum += node(k as f64 * step);
        k += 1;
    }
    let mut estimate = sum * step;
    let mut error = f64::INFINITY;
    for _ in 0..12 {
        step *= 0.5;
        let mut add = 0.0;
        let mut k = 1;
        while k as f64 * step <= T_MAX {
            add += node(k as f64 * step);
            k += 2;
        }
        sum += add;
        let next = sum * step;
        error = (next - estimate).abs();
        estimate = next;
        if error <= abs_tol && step < 0.3 {
            break;
        }
    }
    Integral { value: estimate, error }
}

/// Tanh-sinh on `[a, b]` with each refinement level evaluated in parallel.
///
/// Node contributions are collected in a fixed order and summed pairwise, so the
/// result does not depend on the thread count. Stops when successive levels differ
/// by less than `abs_tol` (after at least `min_level` halvings).
pub fn tanh_sinh_par<F: ?Sized>(a: f64, b: f64, abs_tol: f64, min_level: usize, f: &F) -> Result<Integral>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    use rayon::prelude::*;
    const T_MAX: f64 = 4.5;
    const MAX_LEVEL: usize = 11;
    let h = 0.5 * (b - a);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let node = |t: f64| -> Result<f64> {
        let u = half_pi * t.sinh();
        let w = half_pi * t.cosh() / (u.cosh() * u.cosh());
        let d = h * 2.0 / (1.0 + (2.0 * u.abs()).exp());
        if d <= 0.0 || w == 0.0 {
            return Ok(0.0);
        }
        let (xl, xr) = (a + d, b - d);
        let mut s = 0.0;
        if xl > a && xl < b {
            s += f(xl)?;
        }
        if t != 0.0 && xr > a && xr < b {
            s += f(xr)?;
        }
        Ok(s * w * h)
    };
    let level_sum = |ts: Vec<f64>| -> Result<f64> {
        let v: Vec<f64> = ts.into_par_iter().map(node).collect::<Result<_>>()?;
        Ok(pairwise_sum(&v))
    };
    let mut step = 0.5;
    let count = (T_MAX / step) as usize;
    let mut sum = level_sum((0..=count).map(|k| k as f64 * step).collect())?;
    let mut estimate = sum * step;
    let mut error = f64::INFINITY;
    for level in 1..=MAX_LEVEL {
        step *= 0.5;
        let count = (T_MAX / step) as usize;
        sum += level_sum((1..=count).step_by(2).map(|k| k as f64 * step).collect())?;
        let next = sum * step;
        error = (next - estimate).abs();
        estimate = next;
        if error <= abs_tol && level >= min_level {
            break;
        }
    }
    Ok(Integral { value: estimate, error })
}

/// Integral over `(0, inf)` by the substitution `x = u / (1 - u)`.
pub fn half_line(panels: usize, abs_tol: f64, f: &impl Fn(f64) -> f64) -> Integral {
    let g = |u: f64| {
        if u <= 0.0 || u >= 1.0 {
            return 0.0;
        }
        let v = 1.0 - u;
        f(u / v) / (v * v)
    };
    adaptive(0.0, 1.0, panels, abs_tol, &g)
}

/// Integral over the real line by the substitution `x = tan v`.
pub fn real_line(panels: usize, abs_tol: f64, f: &impl Fn(f64) -> f64) -> Integral {
    let h = std::f64::consts::FRAC_PI_2;
    let g = |v: f64| {
        if v <= -h || v >= h {
            return 0.0;
        }
        let c = v.cos();
        f(v.tan()) / (c * c)
    };
    adaptive(-h, h, panels, abs_tol, &g)
}

/// Fails with `QuadratureFailure` when the reported error exceeds `tol`.
pub fn require(i: Integral, tol: f64, what: &str) -> Result<f64> {
    if i.error <= tol && i.value.is_finite() {
        Ok(i.value)
    } else {
        Err(Error::QuadratureFailure(format!("{what}: error estimate {:.2e} above {tol:.1e}", i.error)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_is_exact_for_polynomials() {
        let g = GaussLegendre::new(32);
        let v = g.integrate(0.0, 2.0, |x| x.powi(63));
        assert!((v - 2f64.powi(64) / 64.0).abs() < 1e-13 * v);
        assert!((g.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let r = adaptive(0.0, 1.0, 4, 1e-12, &|x: f64| x.powf(-0.5));
        let t = tanh_sinh(0.0, 1.0, 1e-13, &|x: f64| (1.0 - x).ln());
        assert!((t.value + 1.0).abs() < 1e-12, "{t:?}");
        assert!((r.value - 2.0).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn compactified_lines() {
        let r = half_line(16, 1e-12, &|x: f64| (-x).exp());
        assert!((r.value - 1.0).abs() < 1e-12);
        let r = real_line(16, 1e-12, &|x: f64| 1.0 / (1.0 + x * x));
        assert!((r.value - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn parallel_tanh_sinh() {
        let r = tanh_sinh_par(0.0, 1.0, 1e-13, 2, &|x: f64| Ok(x.powf(-0.5) + (-(x - 0.5).powi(2) * 400.0).exp())).unwrap();
        let exact = 2.0 + (std::f64::consts::PI / 400.0).sqrt();
        assert!((r.value - exact).abs() < 1e-11, "{r:?}");
    }

    #[test]
    fn pairwise_matches_naive() {
        let v: Vec<f64> = (0..1000).map(|i| 1.0 / (1.0 + i as f64)).collect();
        assert!((pairwise_sum(&v) - v.iter().sum::<f64>()).abs() < 1e-12);
    }
}

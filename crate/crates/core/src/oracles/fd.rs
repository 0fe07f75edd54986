//! Crank–Nicolson solution of `∂t T = ∂xx(s T) - ∂x(q T) - r T` on a truncated,
//! optionally stretched grid with absorbing ends.

use serde::{Deserialize, Serialize};

use crate::density::{DensityGrid, CLAMP_TOL};
use crate::error::{Error, Result};

/// Grid map `x = X(u)` with `u` uniform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Stretch {
    Uniform,
    /// `x = e^u`; needs `x_min > 0`.
    Log,
    /// `x = center + scale · sinh(u)`.
    Sinh { center: f64, scale: f64 },
}

impl Stretch {
    fn u_of(self, x: f64) -> f64 {
        match self {
            Stretch::Uniform => x,
            Stretch::Log => x.ln(),
            Stretch::Sinh { center, scale } => ((x - center) / scale).asinh(),
        }
    }

    /// `(X(u), X'(u), U''(X(u)))`.
    fn eval(self, u: f64) -> (f64, f64, f64) {
        match self {
            Stretch::Uniform => (u, 1.0, 0.0),
            Stretch::Log => {
                let x = u.exp();
                (x, x, -1.0 / (x * x))
            }
            Stretch::Sinh { center, scale } => {
                let (sh, ch) = (u.sinh(), u.cosh());
                (center + scale * sh, scale * ch, -sh / (scale * scale * ch * ch * ch))
            }
        }
    }
}

/// Truncated domain and resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FDConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub n_x: usize,
    /// Steps from the start time to the last output time.
    pub n_t: usize,
    pub stretch: Stretch,
    /// Largest accepted boundary outflow per unit time, relative to the mass.
    pub flux_tol: f64,
}

impl FDConfig {
    pub fn new(x_min: f64, x_max: f64, n_x: usize, n_t: usize, stretch: Stretch) -> Self {
        FDConfig { x_min, x_max, n_x, n_t, stretch, flux_tol: 1e-5 }
    }

    fn check(&self) -> Result<()> {
        if self.n_x < 100 || self.n_t == 0 {
            return Err(Error::InvalidConfig("n_x >= 100 and n_t >= 1 required".into()));
        }
        if !(self.x_min < self.x_max) || !self.x_min.is_finite() || !self.x_max.is_finite() {
            return Err(Error::InvalidConfig("x_min < x_max required".into()));
        }
        if self.stretch == Stretch::Log && !(self.x_min > 0.0) {
            return Err(Error::InvalidConfig("the log stretch needs x_min > 0".into()));
        }
        Ok(())
    }

    fn u_range(&self) -> (f64, f64) {
        (self.stretch.u_of(self.x_min), self.stretch.u_of(self.x_max))
    }

    /// The x-nodes of the grid, ends included.
    pub fn x_nodes(&self) -> Vec<f64> {
        let (u0, u1) = self.u_range();
        let h = (u1 - u0) / (self.n_x - 1) as f64;
        (0..self.n_x).map(|i| self.stretch.eval(u0 + i as f64 * h).0).collect()
    }
}

/// Starting condition.
#[derive(Debug, Clone, PartialEq)]
pub enum Initial {
    /// `δ(x - y)` smoothed to a Gaussian two local cells wide, at `t = 0`.
    Delta,
    /// A density sampled on [`FDConfig::x_nodes`] at time `t0`.
    Profile { t0: f64, values: Vec<f64> },
}

struct Operator {
    lo: Vec<f64>,
    di: Vec<f64>,
    up: Vec<f64>,
    s_u: Vec<f64>,
    q_half: Vec<f64>,
    h: f64,
}

impl Operator {
    fn apply(&self, p: &[f64], out: &mut [f64]) {
        let n = p.len();
        out[0] = 0.0;
        out[n - 1] = 0.0;
        for i in 1..n - 1 {
            out[i] = self.lo[i] * p[i - 1] + self.di[i] * p[i] + self.up[i] * p[i + 1];
        }
    }

    /// `F_{i+1/2} = ∂u(s p) - q p`, the probability flux in the `-u` direction.
    fn flux(&self, p: &[f64], i: usize) -> f64 {
        (self.s_u[i + 1] * p[i + 1] - self.s_u[i] * p[i]) / self.h - self.q_half[i] * 0.5 * (p[i] + p[i + 1])
    }
}

/// Solves `(I - θ dt L) p_new = (I + (1-θ) dt L) p` with `p = 0` at both ends.
fn step(op: &Operator, p: &mut [f64], theta: f64, dt: f64, work: &mut Work) {
    let n = p.len();
    op.apply(p, &mut work.lp);
    for i in 0..n {
        work.rhs[i] = p[i] + (1.0 - theta) * dt * work.lp[i];
    }
    work.rhs[0] = 0.0;
    work.rhs[n - 1] = 0.0;
    // Thomas algorithm
    let (a, b, c) = (&mut work.a, &mut work.b, &mut work.c);
    for i in 0..n {
        if i == 0 || i == n - 1 {
            a[i] = 0.0;
            b[i] = 1.0;
            c[i] = 0.0;
        } else {
            a[i] = -theta * dt * op.lo[i];
            b[i] = 1.0 - theta * dt * op.di[i];
            c[i] = -theta * dt * op.up[i];
        }
    }
    for i in 1..n {
        let w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        work.rhs[i] -= w * work.rhs[i - 1];
    }
    p[n - 1] = work.rhs[n - 1] / b[n - 1];
    for i in (0..n - 1).rev() {
        p[i] = (work.rhs[i] - c[i] * p[i + 1]) / b[i];
    }
}

struct Work {
    lp: Vec<f64>,
    rhs: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
}

/// Crank–Nicolson solution sampled at each time in `t_out` (increasing, after the start).
///
/// The first step is replaced by four backward-Euler half-steps to damp the
/// non-smooth start. `coeffs(x)` returns `(s, q, r)`.
pub fn fd_solve(
    coeffs: &dyn Fn(f64) -> (f64, f64, f64),
    y: f64,
    t_out: &[f64],
    cfg: &FDConfig,
    init: &Initial,
) -> Result<Vec<DensityGrid>> {
    cfg.check()?;
    if !(y > cfg.x_min && y < cfg.x_max) {
        return Err(Error::DomainTooSmall(format!("y = {y} outside [{}, {}]", cfg.x_min, cfg.x_max)));
    }
    let t0 = match init {
        Initial::Delta => 0.0,
        Initial::Profile { t0, values } => {
            if values.len() != cfg.n_x {
                return Err(Error::InvalidConfig(format!("profile has {} values for {} nodes", values.len(), cfg.n_x)));
            }
            *t0
        }
    };
    if t_out.is_empty() || t_out[0] <= t0 || t_out.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidConfig("t_out must be increasing and after the start time".into()));
    }
    let n = cfg.n_x;
    let (u0, u1) = cfg.u_range();
    let h = (u1 - u0) / (n - 1) as f64;
    let nodes: Vec<(f64, f64, f64)> = (0..n).map(|i| cfg.stretch.eval(u0 + i as f64 * h)).collect();
    let xs: Vec<f64> = nodes.iter().map(|v| v.0).collect();

    let mut s_u = vec![0.0; n];
    let mut r = vec![0.0; n];
    for (i, &(x, xp, _)) in nodes.iter().enumerate() {
        let (s, _, ri) = coeffs(x);
        if i > 0 && i + 1 < n && !(s > 0.0) {
            return Err(Error::InvalidConfig(format!("diffusion not positive at x = {x}")));
        }
        s_u[i] = s / (xp * xp);
        r[i] = ri;
    }
    let q_half: Vec<f64> = (0..n - 1)
        .map(|i| {
            let (x, xp, upp) = cfg.stretch.eval(u0 + (i as f64 + 0.5) * h);
            let (s, q, _) = coeffs(x);
            q / xp + s * upp
        })
        .collect();
    let (mut lo, mut di, mut up) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for i in 1..n - 1 {
        let a_next = s_u[i + 1] / h - 0.5 * q_half[i];
        let a_self = -s_u[i] / h - 0.5 * q_half[i];
        let b_self = s_u[i] / h - 0.5 * q_half[i - 1];
        let b_prev = -s_u[i - 1] / h - 0.5 * q_half[i - 1];
        up[i] = a_next / h;
        di[i] = (a_self - b_self) / h - r[i];
        lo[i] = -b_prev / h;
    }
    let op = Operator { lo, di, up, s_u, q_half, h };

    let mut p: Vec<f64> = match init {
        Initial::Delta => {
            let uy = cfg.stretch.u_of(y);
            let width = 2.0 * h;
            let mut p: Vec<f64> = (0..n).map(|i| (-0.5 * ((u0 + i as f64 * h - uy) / width).powi(2)).exp()).collect();
            p[0] = 0.0;
            p[n - 1] = 0.0;
            let total: f64 = p.iter().sum::<f64>() * h;
            p.iter_mut().for_each(|v| *v /= total);
            p
        }
        Initial::Profile { values, .. } => {
            let mut p: Vec<f64> = values.iter().zip(&nodes).map(|(v, nd)| v * nd.1).collect();
            p[0] = 0.0;
            p[n - 1] = 0.0;
            p
        }
    };

    let mut work = Work { lp: vec![0.0; n], rhs: vec![0.0; n], a: vec![0.0; n], b: vec![0.0; n], c: vec![0.0; n] };
    let dt_nominal = (t_out[t_out.len() - 1] - t0) / cfg.n_t as f64;
    let mut now = t0;
    let mut first = true;
    let mut out = Vec::with_capacity(t_out.len());
    for &target in t_out {
        let steps = ((target - now) / dt_nominal).round().max(1.0) as usize;
        let dt = (target - now) / steps as f64;
        for k in 0..steps {
            if first && k == 0 {
                for _ in 0..4 {
                    step(&op, &mut p, 1.0, 0.25 * dt, &mut work);
                }
                first = false;
            } else {
                step(&op, &mut p, 0.5, dt, &mut work);
            }
            let mass: f64 = p.iter().sum::<f64>() * h;
            let outflow = op.flux(&p, 0).max(0.0) + (-op.flux(&p, n - 2)).max(0.0);
            if outflow > cfg.flux_tol * mass.abs().max(f64::MIN_POSITIVE) {
                return Err(Error::DomainTooSmall(format!(
                    "boundary outflow {outflow:.3e} per unit time exceeds {:.0e} of mass",
                    cfg.flux_tol
                )));
            }
        }
        now = target;
        let raw: Vec<f64> = p.iter().zip(&nodes).map(|(v, nd)| v / nd.1).collect();
        let peak = raw.iter().cloned().fold(0.0_f64, f64::max);
        let min_before_clamp = raw.iter().cloned().fold(f64::INFINITY, f64::min);
        if min_before_clamp < -1e-3 * peak {
            return Err(Error::InstabilityDetected(format!("negative lobe {min_before_clamp:.3e} at t = {target}")));
        }
        let values = raw.into_iter().map(|v| if v < 0.0 && v > -CLAMP_TOL { 0.0 } else { v }).collect();
        out.push(DensityGrid {
            x_nodes: xs.clone(),
            values,
            t: target,
            y,
            mass: p.iter().sum::<f64>() * h,
            model: None,
            min_before_clamp,
        });
    }
    Ok(out)
}

/// Relative L2 distance `||a - b|| / ||b||` with trapezoid weights on the nodes.
pub fn l2_relative(x: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..x.len() {
        let w = match i {
            0 => 0.5 * (x[1] - x[0]),
            _ if i + 1 == x.len() => 0.5 * (x[i] - x[i - 1]),
            _ => 0.5 * (x[i + 1] - x[i - 1]),
        };
        num += w * (a[i] - b[i]).powi(2);
        den += w * b[i] * b[i];
    }
    (num / den).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn heat_kernel() {
        let cfg = FDConfig::new(-8.0, 8.0, 2000, 400, Stretch::Uniform);
        let g = fd_solve(&|_| (1.0, 0.0, 0.0), 0.0, &[0.5], &cfg, &Initial::Delta).unwrap();
        let err = g[0]
            .x_nodes
            .iter()
            .zip(&g[0].values)
            .map(|(x, v)| (v - (-x * x / 4.0 / 0.5).exp() / (4.0 * PI * 0.5).sqrt()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-4, "{err}");
        assert!((g[0].mass - 1.0).abs() < 1e-4);
    }

    #[test]
    fn ornstein_uhlenbeck() {
        let cfg = FDConfig::new(-8.0, 8.0, 1600, 400, Stretch::Sinh { center: 0.0, scale: 2.0 });
        let (y, t) = (1.0, 0.7);
        let g = fd_solve(&|x| (1.0, -x, 0.0), y, &[t], &cfg, &Initial::Delta).unwrap();
        let var = 1.0 - (-2.0 * t).exp();
        let m = y * (-t).exp();
        let exact: Vec<f64> = g[0].x_nodes.iter().map(|x| (-(x - m).powi(2) / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()).collect();
        assert!(l2_relative(&g[0].x_nodes, &g[0].values, &exact) < 1e-3);
    }

    #[test]
    fn uniform_sink() {
        let cfg = FDConfig::new(-12.0, 12.0, 1000, 200, Stretch::Uniform);
        let g = fd_solve(&|_| (1.0, 0.0, 0.7), 0.0, &[0.5, 1.0], &cfg, &Initial::Delta).unwrap();
        for gr in &g {
            assert!((gr.mass - (-0.7 * gr.t).exp()).abs() < 1e-4);
        }
    }

    #[test]
    fn narrow_domain_is_reported() {
        let cfg = FDConfig::new(-1.0, 1.0, 400, 100, Stretch::Uniform);
        let r = fd_solve(&|_| (1.0, 0.0, 0.0), 0.0, &[1.0], &cfg, &Initial::Delta);
        assert!(matches!(r, Err(Error::DomainTooSmall(_))));
    }
}

//! Euler–Maruyama simulation of the B-R Langevin equation and histogram comparison.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bertalanffy::BRSpec;
use crate::error::{Error, Result};
use crate::quad::{pairwise_sum, GaussLegendre};

/// Largest tolerated fraction of paths that leave the state space.
pub const MAX_BLOWUP_FRACTION: f64 = 1e-3;

/// Simulation settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MCConfig {
    pub n_paths: usize,
    pub dt: f64,
    pub seed: u64,
    pub binning: Binning,
    pub crossing: Crossing,
}

/// What happens to a path whose step leaves the state space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Crossing {
    /// The path is dropped and counted; the run fails above [`MAX_BLOWUP_FRACTION`].
    Absorb,
    /// The step is reflected (`ξ -> |ξ|`) and the crossing is counted.
    Reflect,
}

impl MCConfig {
    pub fn new(n_paths: usize, dt: f64, seed: u64) -> Self {
        MCConfig { n_paths, dt, seed, binning: Binning::FreedmanDiaconis, crossing: Crossing::Absorb }
    }
}

/// Histogram bin layout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Binning {
    /// Width `2 IQR n^{-1/3}` over the central 99.8% of the samples.
    FreedmanDiaconis,
    Fixed { lo: f64, hi: f64, bins: usize },
}

/// Integer bin counts; samples outside the edges are counted separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub outside: u64,
    pub n_samples: u64,
    /// Paths that stepped out of the state space at least once.
    pub blowups: u64,
}

impl Histogram {
    pub fn from_samples(samples: &[f64], binning: Binning, blowups: u64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidConfig("need at least two samples".into()));
        }
        let (lo, hi, bins) = match binning {
            Binning::Fixed { lo, hi, bins } => (lo, hi, bins),
            Binning::FreedmanDiaconis => {
                let mut s = samples.to_vec();
                s.sort_by(f64::total_cmp);
                let qt = |p: f64| s[((s.len() - 1) as f64 * p).round() as usize];
                let iqr = qt(0.75) - qt(0.25);
                let (lo, hi) = (qt(0.001), qt(0.999));
                let width = 2.0 * iqr * (s.len() as f64).powf(-1.0 / 3.0);
                let bins = if width > 0.0 { ((hi - lo) / width).ceil().clamp(1.0, 100_000.0) as usize } else { 1 };
                (lo, hi, bins)
            }
        };
        if !(hi > lo) || bins == 0 {
            return Err(Error::InvalidConfig("histogram range is empty".into()));
        }
        let width = (hi - lo) / bins as f64;
        let edges: Vec<f64> = (0..=bins).map(|i| lo + i as f64 * width).collect();
        let mut counts = vec![0u64; bins];
        let mut outside = 0;
        for &v in samples {
            if v < lo || v > hi {
                outside += 1;
                continue;
            }
            let k = (((v - lo) / width) as usize).min(bins - 1);
            counts[k] += 1;
        }
        Ok(Histogram { edges, counts, outside, n_samples: samples.len() as u64, blowups })
    }

    /// Bin centres and normalized densities.
    pub fn density(&self) -> Vec<(f64, f64)> {
        let n = self.n_samples as f64;
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let w = self.edges[i + 1] - self.edges[i];
                (0.5 * (self.edges[i] + self.edges[i + 1]), c as f64 / (n * w))
            })
            .collect()
    }
}

/// Standard normal pairs by Box–Muller.
struct Normals {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl Normals {
    fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Normals { rng, spare: None }
    }

    fn uniform(&mut self) -> f64 {
        // in (0, 1]
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn next(&mut self) -> f64 {
        if let Some(v) = self.spare.take() {
            return v;
        }
        let (u1, u2) = (self.uniform(), self.uniform());
        let r = (-2.0 * u1.ln()).sqrt();
        let th = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * th.sin());
        r * th.cos()
    }
}

fn check(br: &BRSpec, y: f64, t: f64, cfg: &MCConfig) -> Result<usize> {
    br.check()?;
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::OutOfSupport { x: y });
    }
    if !(t > 0.0) || !(cfg.dt > 0.0) || cfg.n_paths == 0 {
        return Err(Error::InvalidConfig("t > 0, dt > 0 and n_paths > 0 required".into()));
    }
    Ok((t / cfg.dt).ceil() as usize)
}

fn collect(results: Vec<(Option<f64>, u64)>) -> Result<(Vec<f64>, u64)> {
    let total = results.len();
    let samples: Vec<f64> = results.iter().filter_map(|r| r.0).collect();
    let dropped = total - samples.len();
    if dropped as f64 > MAX_BLOWUP_FRACTION * total as f64 {
        return Err(Error::PathBlowup { count: dropped, total });
    }
    let crossed = results.iter().filter(|r| r.1 > 0).count() as u64;
    Ok((samples, crossed))
}

/// Terminal values `x(t)` from Euler–Maruyama on `ξ = x^{1-ζ}`, in path order,
/// together with the number of paths that stepped to `ξ <= 0` at least once.
pub fn simulate_br_samples(br: &BRSpec, y: f64, t: f64, cfg: &MCConfig) -> Result<(Vec<f64>, u64)> {
    let steps = check(br, y, t, cfg)?;
    let dt = t / steps as f64;
    let sdt = dt.sqrt();
    let z1 = br.zeta - 1.0;
    let so = br.omega.sqrt();
    let xi0 = ((1.0 - br.zeta) * y.ln()).exp();
    let results: Vec<(Option<f64>, u64)> = (0..cfg.n_paths as u64)
        .into_par_iter()
        .map(|path| {
            let mut g = Normals::new(cfg.seed, path);
            let mut xi = xi0;
            let mut crossings = 0;
            for _ in 0..steps {
                let (w1, w2) = (g.next() * sdt, g.next() * sdt);
                let drift =
                    z1 * (br.b - br.a * xi + 0.5 * br.zeta * br.omega * (br.alpha * br.alpha * xi + br.beta * br.beta / xi));
                xi += drift * dt + z1 * so * (br.beta * w2 - br.alpha * xi * w1);
                if !(xi > 0.0) {
                    crossings += 1;
                    match cfg.crossing {
                        Crossing::Reflect if xi < 0.0 => xi = -xi,
                        _ => return (None, crossings),
                    }
                }
            }
            (Some((xi.ln() / (1.0 - br.zeta)).exp()), crossings)
        })
        .collect();
    collect(results)
}

/// Euler–Maruyama in the original coordinate, for cross-checking the transformed scheme.
pub fn simulate_br_direct(br: &BRSpec, y: f64, t: f64, cfg: &MCConfig) -> Result<(Vec<f64>, u64)> {
    let steps = check(br, y, t, cfg)?;
    let dt = t / steps as f64;
    let sdt = dt.sqrt();
    let so = br.omega.sqrt();
    let results: Vec<(Option<f64>, u64)> = (0..cfg.n_paths as u64)
        .into_par_iter()
        .map(|path| {
            let mut g = Normals::new(cfg.seed, path);
            let mut x = y;
            let mut crossings = 0;
            for _ in 0..steps {
                let (w1, w2) = (g.next() * sdt, g.next() * sdt);
                let xz = x.powf(br.zeta);
                x += (br.a * x - br.b * xz) * dt + so * (br.alpha * x * w1 - br.beta * xz * w2);
                if !x.is_finite() {
                    return (None, crossings + 1);
                }
                if !(x > 0.0) {
                    crossings += 1;
                    match cfg.crossing {
                        Crossing::Reflect if x < 0.0 => x = -x,
                        _ => return (None, crossings),
                    }
                }
            }
            (Some(x), crossings)
        })
        .collect();
    collect(results)
}

/// Histogram of `x(t)` started at `y`.
pub fn simulate_br(br: &BRSpec, y: f64, t: f64, cfg: &MCConfig) -> Result<Histogram> {
    let (samples, blown) = simulate_br_samples(br, y, t, cfg)?;
    Histogram::from_samples(&samples, cfg.binning, blown)
}

/// `Σ |p̂_i - P_i| + |p̂_out - P_out|`, with `P_i` the analytic mass of bin `i`
/// (8-point Gauss rule per bin) and `P_out = 1 - Σ P_i`.
pub fn l1_distance<F>(hist: &Histogram, density: &F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let rule = GaussLegendre::new(8);
    let n = hist.n_samples as f64;
    let masses: Vec<f64> = (0..hist.counts.len())
        .into_par_iter()
        .map(|i| {
            let mut s = 0.0;
            for (x, w) in rule.mapped(hist.edges[i], hist.edges[i + 1]) {
                s += w * density(x)?;
            }
            Ok(s)
        })
        .collect::<Result<_>>()?;
    let diffs: Vec<f64> = masses.iter().zip(&hist.counts).map(|(m, &c)| (c as f64 / n - m).abs()).collect();
    let outside = hist.outside as f64 / n - (1.0 - pairwise_sum(&masses));
    Ok(pairwise_sum(&diffs) + outside.abs())
}

/// Mean and second moment with their standard errors.
pub fn moments(samples: &[f64]) -> [(f64, f64); 2] {
    let n = samples.len() as f64;
    let m1 = pairwise_sum(samples) / n;
    let sq: Vec<f64> = samples.iter().map(|v| v * v).collect();
    let m2 = pairwise_sum(&sq) / n;
    let q4: Vec<f64> = sq.iter().map(|v| v * v).collect();
    let m4 = pairwise_sum(&q4) / n;
    [(m1, ((m2 - m1 * m1) / n).sqrt()), (m2, ((m4 - m2 * m2) / n).sqrt())]
}

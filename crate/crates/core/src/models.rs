//! The four model families: coefficients, weights, restrictions, the barred
//! decomposition and the Liouville transformation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Model family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Laguerre,
    Bessel,
    FisherSnedecor,
    Romanovski,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Laguerre => "laguerre",
            Family::Bessel => "bessel",
            Family::FisherSnedecor => "fisher-snedecor",
            Family::Romanovski => "romanovski",
        }
    }

    /// Open support `(lo, hi)`.
    pub fn support(self) -> (f64, f64) {
        match self {
            Family::Romanovski => (f64::NEG_INFINITY, f64::INFINITY),
            _ => (0.0, f64::INFINITY),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "laguerre" | "l" => Ok(Family::Laguerre),
            "bessel" | "b" => Ok(Family::Bessel),
            "fisher-snedecor" | "fisher" | "fs" | "f-s" => Ok(Family::FisherSnedecor),
            "romanovski" | "r" => Ok(Family::Romanovski),
            other => Err(Error::InvalidModel(format!("unknown model '{other}'"))),
        }
    }
}

/// A family together with its parameters. `sigma` is used by Laguerre and Bessel,
/// `sigma1`/`sigma2` by Fisher–Snedecor and Romanovski; unused fields are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub kind: Family,
    pub gamma: f64,
    #[serde(default)]
    pub sigma: f64,
    #[serde(default)]
    pub sigma1: f64,
    #[serde(default)]
    pub sigma2: f64,
}

impl ModelSpec {
    pub fn laguerre(gamma: f64, sigma: f64) -> Self {
        ModelSpec { kind: Family::Laguerre, gamma, sigma, sigma1: 0.0, sigma2: 0.0 }
    }
    pub fn bessel(gamma: f64, sigma: f64) -> Self {
        ModelSpec { kind: Family::Bessel, gamma, sigma, sigma1: 0.0, sigma2: 0.0 }
    }
    pub fn fisher_snedecor(gamma: f64, sigma1: f64, sigma2: f64) -> Self {
        ModelSpec { kind: Family::FisherSnedecor, gamma, sigma: 0.0, sigma1, sigma2 }
    }
    pub fn romanovski(gamma: f64, sigma1: f64, sigma2: f64) -> Self {
        ModelSpec { kind: Family::Romanovski, gamma, sigma: 0.0, sigma1, sigma2 }
    }

    /// True when `x` lies in the open support.
    pub fn in_support(&self, x: f64) -> bool {
        let (lo, hi) = self.kind.support();
        x > lo && x < hi
    }

    fn check_support(&self, x: f64) -> Result<()> {
        if self.in_support(x) && x.is_finite() {
            Ok(())
        } else {
            Err(Error::OutOfSupport { x })
        }
    }

    /// Value of γ at which the sink vanishes identically.
    pub fn sink_free_gamma(&self) -> f64 {
        match self.kind {
            Family::Laguerre | Family::Bessel => 0.0,
            Family::FisherSnedecor | Family::Romanovski => self.sigma1,
        }
    }

    /// True when `r(x) = 0` for all `x`.
    pub fn is_sink_free(&self) -> bool {
        self.gamma == self.sink_free_gamma()
    }

    /// The exponent ϰ of the `s(x)^ϰ` prefactor.
    pub fn varkappa(&self) -> f64 {
        match self.kind {
            Family::Laguerre => self.gamma,
            Family::Bessel => 0.5 * self.gamma,
            Family::FisherSnedecor | Family::Romanovski => 0.5 * (self.gamma - self.sigma1),
        }
    }
}

/// Diffusion, drift and sink at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub s: f64,
    pub q: f64,
    pub r: f64,
}

/// `s(x)`, `s'(x)`, `s''(x)`, `q(x)`, `q'(x)`.
pub(crate) fn poly_parts(m: &ModelSpec, x: f64) -> [f64; 5] {
    let (s1, s2) = (m.sigma1, m.sigma2);
    match m.kind {
        Family::Laguerre => [x, 1.0, 0.0, m.sigma + 1.0 - x, -1.0],
        Family::Bessel => [x * x, 2.0 * x, 2.0, (m.sigma + 2.0) * x + 1.0, m.sigma + 2.0],
        Family::FisherSnedecor => [
            x * x + x,
            2.0 * x + 1.0,
            2.0,
            2.0 * (s1 + 1.0) * x + s1 + s2 + 1.0,
            2.0 * (s1 + 1.0),
        ],
        Family::Romanovski => [x * x + 1.0, 2.0 * x, 2.0, 2.0 * (s1 + 1.0) * x + s2, 2.0 * (s1 + 1.0)],
    }
}

fn sink(m: &ModelSpec, x: f64) -> f64 {
    let (g, s1, s2) = (m.gamma, m.sigma1, m.sigma2);
    match m.kind {
        Family::Laguerre => g * (g + m.sigma) / x,
        Family::Bessel => g / x,
        Family::FisherSnedecor => (g - s1) * (g + s1 + 2.0 * s2 * (1.0 + 2.0 * x)) / (4.0 * x * (x + 1.0)),
        Family::Romanovski => (s1 - g) * (g + s1 - s2 * x) / (x * x + 1.0),
    }
}

/// The `(s, q, r)` triple at `x`.
pub fn coefficients(m: &ModelSpec, x: f64) -> Result<Coefficients> {
    m.check_support(x)?;
    let p = poly_parts(m, x);
    Ok(Coefficients { s: p[0], q: p[3], r: sink(m, x) })
}

/// `ln W(x)`.
pub fn ln_weight(m: &ModelSpec, x: f64) -> Result<f64> {
    m.check_support(x)?;
    let (s1, s2) = (m.sigma1, m.sigma2);
    Ok(match m.kind {
        Family::Laguerre => m.sigma * x.ln() - x,
        Family::Bessel => m.sigma * x.ln() - 1.0 / x,
        Family::FisherSnedecor => (s1 + s2) * x.ln() + (s1 - s2) * x.ln_1p(),
        Family::Romanovski => s1 * x.mul_add(x, 1.0).ln() + s2 * x.atan(),
    })
}

/// The weight `W(x)` solving Pearson's equation `(sW)' = qW`.
pub fn weight(m: &ModelSpec, x: f64) -> Result<f64> {
    Ok(ln_weight(m, x)?.exp())
}

/// ϰ and the linear drift and constant sink of the barred operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarredData {
    pub varkappa: f64,
    pub qbar_slope: f64,
    pub qbar_intercept: f64,
    pub rbar: f64,
}

/// `r(x) - ϰ [s'' + ((ϰ - 1) s'^2 + q s') / s]`, the barred sink computed pointwise.
pub fn rbar_at(m: &ModelSpec, x: f64) -> f64 {
    let k = m.varkappa();
    let [s, sp, spp, q, _] = poly_parts(m, x);
    sink(m, x) - k * (spp + ((k - 1.0) * sp * sp + q * sp) / s)
}

/// The barred decomposition; fails if `rbar < 0` or if the pointwise formula
/// disagrees with the tabulated one.
pub fn barred(m: &ModelSpec) -> Result<BarredData> {
    let (g, s1, s2, sg) = (m.gamma, m.sigma1, m.sigma2, m.sigma);
    let (slope, intercept, rbar) = match m.kind {
        Family::Laguerre => (-1.0, 2.0 * g + sg + 1.0, g),
        Family::Bessel => (2.0 * g + sg + 2.0, 1.0, -g * (g + sg + 1.0)),
        Family::FisherSnedecor => (2.0 * (g + 1.0), g + s2 + 1.0, (s1 - g) * (g + s1 + 1.0)),
        Family::Romanovski => (2.0 * (g + 1.0), s2, (s1 - g) * (g + s1 + 1.0)),
    };
    let k = m.varkappa();
    for i in 0..7 {
        let x = 0.3 + 0.9 * i as f64;
        let [_, sp, _, q, _] = poly_parts(m, x);
        let qbar = 2.0 * k * sp + q;
        let scale = 1.0 + qbar.abs() + rbar.abs();
        let rb = rbar_at(m, x);
        if (qbar - (slope * x + intercept)).abs() > 1e-9 * scale || (rb - rbar).abs() > 1e-9 * scale {
            return Err(Error::InvalidModel(format!(
                "barred decomposition inconsistent at x = {x}: rbar(x) = {rb}, tabulated {rbar}"
            )));
        }
    }
    if rbar < 0.0 {
        return Err(Error::NegativeRbar(rbar));
    }
    Ok(BarredData { varkappa: k, qbar_slope: slope, qbar_intercept: intercept, rbar })
}

/// A point of the Liouville-transformed problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Liouville {
    pub x: f64,
    pub potential: f64,
    pub amplitude: f64,
}

/// Range of the Liouville variable `z`.
pub fn liouville_range(kind: Family) -> (f64, f64) {
    match kind {
        Family::Laguerre | Family::FisherSnedecor => (0.0, f64::INFINITY),
        Family::Bessel | Family::Romanovski => (f64::NEG_INFINITY, f64::INFINITY),
    }
}

/// `z(x) = int dx / sqrt(s)`, with the integration constant matching `x(z)`.
pub fn liouville_z(m: &ModelSpec, x: f64) -> Result<f64> {
    m.check_support(x)?;
    Ok(match m.kind {
        Family::Laguerre => 2.0 * x.sqrt(),
        Family::Bessel => x.ln(),
        Family::FisherSnedecor => 2.0 * x.sqrt().asinh(),
        Family::Romanovski => x.asinh(),
    })
}

/// `(x(z), V(x(z)), sqrt(W sqrt(s)))` in closed form.
pub fn liouville(m: &ModelSpec, z: f64) -> Result<Liouville> {
    let (lo, hi) = liouville_range(m.kind);
    if !(z > lo && z < hi) {
        return Err(Error::OutOfSupport { x: z });
    }
    let (g, sg, s1, s2) = (m.gamma, m.sigma, m.sigma1, m.sigma2);
    let t = match m.kind {
        Family::Laguerre => Liouville {
            x: 0.25 * z * z,
            potential: z * z / 16.0 + (4.0 * g * (sg + g) + sg * sg - 0.25) / (z * z) - 0.5 * (sg + 1.0),
            amplitude: (0.5 * z).powf(sg + 0.5) * (-z * z / 8.0).exp(),
        },
        Family::Bessel => Liouville {
            x: z.exp(),
            potential: 0.5 * (sg + 2.0 * g) * (-z).exp()
                + 0.25 * (-2.0 * z).exp()
                + (0.5 * (sg + 1.0)).powi(2),
            amplitude: (0.5 * (sg + 1.0) * z - 0.5 * (-z).exp()).exp(),
        },
        Family::FisherSnedecor => {
            let sh = z.sinh();
            Liouville {
                x: (0.5 * z).sinh().powi(2),
                potential: (g * g + s2 * s2 - 0.25 + 2.0 * g * s2 * z.cosh()) / (sh * sh)
                    + (s1 + 0.5).powi(2),
                amplitude: (0.5 * sh).powf(s1 + 0.5) * (0.5 * z).tanh().powf(s2),
            }
        }
        Family::Romanovski => {
            let ch = z.cosh();
            Liouville {
                x: z.sinh(),
                potential: (0.25 - g * g + 0.25 * s2 * s2 + g * s2 * z.sinh()) / (ch * ch)
                    + (s1 + 0.5).powi(2),
                amplitude: ch.powf(s1 + 0.5) * (0.5 * s2 * z.sinh().atan()).exp(),
            }
        }
    };
    Ok(t)
}

/// The Schrödinger potential computed directly from `(s, q, r)`.
pub fn potential_from_coefficients(m: &ModelSpec, x: f64) -> Result<f64> {
    m.check_support(x)?;
    let [s, sp, spp, q, qp] = poly_parts(m, x);
    let rs = s.sqrt();
    let d1 = sp / (2.0 * rs);
    let d2 = (2.0 * s * spp - sp * sp) / (4.0 * s * rs);
    Ok((0.5 * d1).powi(2) - 0.5 * rs * d2 + q * q / (4.0 * s) + 0.5 * qp - q * d1 / rs + sink(m, x))
}

/// One violated restriction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub message: String,
}

/// Outcome of [`validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    /// `Ok(())` or an `InvalidModel` error carrying the first violation.
    pub fn into_result(self) -> Result<()> {
        match self.violations.into_iter().next() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidModel(v.message)),
        }
    }
}

/// Lists every violated parameter restriction.
pub fn validate(m: &ModelSpec) -> ValidationReport {
    let mut v = Vec::new();
    let mut need = |ok: bool, msg: &str| {
        if !ok {
            v.push(Violation { message: msg.to_string() });
        }
    };
    let (g, sg, s1, s2) = (m.gamma, m.sigma, m.sigma1, m.sigma2);
    let finite = match m.kind {
        Family::Laguerre | Family::Bessel => g.is_finite() && sg.is_finite(),
        _ => g.is_finite() && s1.is_finite() && s2.is_finite(),
    };
    need(finite, "parameters must be finite");
    match m.kind {
        Family::Laguerre => {
            need(g >= 0.0, "gamma >= 0 required");
            need(sg + 2.0 * g > -1.0, "sigma + 2*gamma > -1 required");
        }
        Family::Bessel => {
            need(g * (g + sg + 1.0) <= 0.0, "gamma*(gamma+sigma+1) <= 0 required");
            need(sg + 2.0 * g < -1.0, "sigma + 2*gamma < -1 required");
        }
        Family::FisherSnedecor | Family::Romanovski => {
            need((s1 - g) * (g + s1 + 1.0) >= 0.0, "(sigma1-gamma)*(gamma+sigma1+1) >= 0 required");
            need(2.0 * g < -1.0, "2*gamma < -1 required");
            if m.kind == Family::FisherSnedecor {
                need(g + s2 > -1.0, "gamma + sigma2 > -1 required");
            }
        }
    }
    ValidationReport { violations: v }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_examples() {
        let c = coefficients(&ModelSpec::laguerre(0.0, 0.7), 1.0).unwrap();
        assert_eq!((c.s, c.q, c.r), (1.0, 0.7, 0.0));
        let m = ModelSpec::romanovski(-0.6, -2.7, 2.1);
        let c = coefficients(&m, 0.0).unwrap();
        assert_eq!((c.s, c.q), (1.0, 2.1));
        assert!((c.r - (-2.7 + 0.6) * (-0.6 - 2.7)).abs() < 1e-15);
        // q = (sigma + 2) x + 1 = -1 at sigma = -3, x = 2.
        let c = coefficients(&ModelSpec::bessel(0.0, -3.0), 2.0).unwrap();
        assert_eq!((c.s, c.q, c.r), (4.0, -1.0, 0.0));
        assert!(coefficients(&ModelSpec::bessel(0.0, -3.0), 0.0).is_err());
    }

    #[test]
    fn weight_examples() {
        assert!((weight(&ModelSpec::laguerre(0.0, 0.0), 1.0).unwrap() - (-1f64).exp()).abs() < 1e-16);
        assert_eq!(weight(&ModelSpec::romanovski(-0.6, -2.7, 2.1), 0.0).unwrap(), 1.0);
        let w = weight(&ModelSpec::bessel(0.0, -4.0), 0.5).unwrap();
        assert!((w - 16.0 * (-2f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn barred_examples() {
        let b = barred(&ModelSpec::laguerre(0.5, 1.0)).unwrap();
        assert_eq!((b.varkappa, b.qbar_slope, b.qbar_intercept, b.rbar), (0.5, -1.0, 3.0, 0.5));
        let b = barred(&ModelSpec::romanovski(-2.7, -2.7, 2.1)).unwrap();
        assert_eq!((b.varkappa, b.rbar), (0.0, 0.0));
        let b = barred(&ModelSpec::fisher_snedecor(-1.5648, -1.5648, 1.7921)).unwrap();
        assert_eq!(b.rbar, 0.0);
        assert!(matches!(barred(&ModelSpec::laguerre(-0.2, 1.0)), Err(Error::NegativeRbar(_))));
    }

    #[test]
    fn liouville_examples() {
        assert_eq!(liouville(&ModelSpec::bessel(0.0, -4.0), 0.0).unwrap().x, 1.0);
        let m = ModelSpec::romanovski(-0.6, -2.7, 2.1);
        let l = liouville(&m, 0.0).unwrap();
        assert_eq!(l.x, 0.0);
        let expect = (0.25 - 0.36 + 2.1 * 2.1 / 4.0) + (-2.2f64).powi(2);
        assert!((l.potential - expect).abs() < 1e-14);
        assert_eq!(liouville(&ModelSpec::laguerre(0.0, 1.0), 2.0).unwrap().x, 1.0);
    }

    #[test]
    fn validate_examples() {
        assert!(validate(&ModelSpec::romanovski(-0.6, -2.7, 2.1)).passes());
        let r = validate(&ModelSpec::laguerre(-0.1, 1.0));
        assert_eq!(r.violations[0].message, "gamma >= 0 required");
        let r = validate(&ModelSpec::bessel(0.0, -1.0));
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].message, "sigma + 2*gamma < -1 required");
    }
}

use std::f64::consts::PI;

use super::gamma::ln_gamma_real;

/// `ln I_nu(x)` for `nu > -1`, `x > 0`; never overflows.
pub fn ln_bessel_i(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 0.0 } else if nu > 0.0 { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    if x > 30.0 && x > 2.0 * nu * nu {
        if let Some(s) = asymptotic_scaled(nu, x) {
            return s.ln() + x;
        }
    }
    series_ln(nu, x)
}

/// Exponentially scaled `e^{-x} I_nu(x)`.
pub fn bessel_i_scaled(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return ln_bessel_i(nu, x).exp();
    }
    (ln_bessel_i(nu, x) - x).exp()
}

/// Modified Bessel function of the first kind, `I_nu(x)`.
pub fn bessel_i(nu: f64, x: f64) -> f64 {
    ln_bessel_i(nu, x).exp()
}

fn series_ln(nu: f64, x: f64) -> f64 {
    let (lg, _) = ln_gamma_real(nu + 1.0).expect("order > -1");
    let mut log_pre = nu * (0.5 * x).ln() - lg;
    let q = 0.25 * x * x;
    let mut sum = 1.0_f64;
    let mut term = 1.0_f64;
    // Every term is positive for nu > -1, so there is no cancellation.
    for k in 1..100_000 {
        let kf = k as f64;
        term *= q / (kf * (nu + kf));
        sum += term;
        if sum > 1e250 {
            log_pre += sum.ln();
            term /= sum;
            sum = 1.0;
        }
        if term < 1e-17 * sum && kf > q.sqrt() {
            break;
        }
    }
    log_pre + sum.ln()
}

fn asymptotic_scaled(nu: f64, x: f64) -> Option<f64> {
    let mu = 4.0 * nu * nu;
    let mut sum = 1.0_f64;
    let mut term = 1.0_f64;
    for k in 1..60 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let next = -term * (mu - odd * odd) / (kf * 8.0 * x);
        if next.abs() > term.abs() {
            return None;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            return Some(sum / (2.0 * PI * x).sqrt());
        }
    }
    None
}

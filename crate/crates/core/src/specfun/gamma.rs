use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

// Lanczos approximation, Godfrey's g = 607/128 with 15 coefficients.
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_C: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    0.339_946_499_848_118_886_99e-4,
    0.465_236_289_270_485_756_65e-4,
    -0.983_744_753_048_795_646_77e-4,
    0.158_088_703_224_912_488_84e-3,
    -0.210_264_441_724_104_883_19e-3,
    0.217_439_618_115_212_643_20e-3,
    -0.164_318_106_536_763_890_22e-3,
    0.844_182_239_838_527_432_93e-4,
    -0.261_908_384_015_814_086_70e-4,
    0.368_991_826_595_316_227_04e-5,
];
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_741_78;

fn is_pole(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && (z.re - z.re.round()).abs() < 1e-300
}

/// Log-gamma on the principal sheet for `Re z >= 0.5`, continued by reflection elsewhere.
pub fn ln_gamma(z: C64) -> Result<C64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidModel(format!("non-finite gamma argument {z}")));
    }
    if is_pole(z) {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    if z.re < 0.5 {
        let w = C64::new(1.0, 0.0) - z;
        return Ok(C64::new(PI.ln(), 0.0) - ln_sin_pi(z) - lanczos(w));
    }
    Ok(lanczos(z))
}

fn lanczos(z: C64) -> C64 {
    let zm = z - 1.0;
    let mut s = C64::new(LANCZOS_C[0], 0.0);
    for (k, &c) in LANCZOS_C.iter().enumerate().skip(1) {
        s += c / (zm + k as f64);
    }
    let t = zm + LANCZOS_G + 0.5;
    HALF_LN_2PI + (zm + 0.5) * t.ln() - t + s.ln()
}

/// `ln sin(pi z)`, stable for large `|Im z|`.
fn ln_sin_pi(z: C64) -> C64 {
    // Reduce the real part to [-1, 1) to keep the argument of sin accurate.
    let n = (z.re / 2.0).round() * 2.0;
    let zr = C64::new(z.re - n, z.im);
    if zr.im.abs() < 20.0 {
        return (zr * PI).sin().ln();
    }
    // sin w = e^{-iw} (e^{2iw} - 1) / (2i) with |e^{2iw}| small when Im w > 0.
    let flip = zr.im < 0.0;
    let w = if flip { zr.conj() * PI } else { zr * PI };
    let i = C64::new(0.0, 1.0);
    let e = (2.0 * i * w).exp();
    let v = -i * w + ((e - 1.0) / (2.0 * i)).ln();
    if flip {
        v.conj()
    } else {
        v
    }
}

/// Complex gamma function.
pub fn gamma(z: C64) -> Result<C64> {
    Ok(ln_gamma(z)?.exp())
}

/// Reciprocal gamma; zero at the poles of Γ.
pub fn rgamma(z: C64) -> C64 {
    match ln_gamma(z) {
        Ok(l) => (-l).exp(),
        Err(_) => C64::new(0.0, 0.0),
    }
}

/// `(ln|Γ(x)|, sign Γ(x))` for real `x`.
pub fn ln_gamma_real(x: f64) -> Result<(f64, f64)> {
    let l = ln_gamma(C64::new(x, 0.0))?;
    let sign = if x > 0.0 {
        1.0
    } else {
        // sign of Γ on (-k-1, -k) is (-1)^{k+1}
        let k = (-x).floor();
        if k as i64 % 2 == 0 {
            -1.0
        } else {
            1.0
        }
    };
    Ok((l.re, sign))
}

/// Real gamma function.
pub fn gamma_real(x: f64) -> Result<f64> {
    let (l, s) = ln_gamma_real(x)?;
    Ok(s * l.exp())
}

/// Rising factorial `a (a+1) ... (a+n-1)`.
pub fn pochhammer(a: C64, n: usize) -> C64 {
    (0..n).fold(C64::new(1.0, 0.0), |p, k| p * (a + k as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn trivial_values() {
        assert!(ln_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!((ln_gamma(c(0.5, 0.0)).unwrap().re - 0.5 * PI.ln()).abs() < 1e-15);
        assert!((gamma_real(5.0).unwrap() - 24.0).abs() < 1e-12);
    }

    #[test]
    fn reference_values() {
        // Reference values from a 30-digit arbitrary-precision evaluation.
        let v = ln_gamma(c(1.0, 1.0)).unwrap();
        assert!((v - c(-0.650_923_199_301_856_3, -0.301_640_320_467_533_2)).norm() < 1e-13);
        let g = gamma(c(-2.5, 3.0)).unwrap();
        let r = c(4.797_884_108_418_970e-4, 2.988_557_111_448_588_7e-4);
        assert!((g - r).norm() / r.norm() < 1e-13);
        let g = gamma(c(0.3, 40.0)).unwrap();
        let r = c(5.626_188_948_487_170e-28, 2.562_675_080_558_234e-28);
        assert!((g - r).norm() / r.norm() < 1e-12, "{g}");
    }

    #[test]
    fn poles_and_signs() {
        assert!(matches!(ln_gamma(c(-3.0, 0.0)), Err(Error::Pole { .. })));
        assert!(gamma_real(-0.5).unwrap() < 0.0);
        assert!(gamma_real(-1.5).unwrap() > 0.0);
        assert!((gamma_real(-0.5).unwrap() + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert_eq!(rgamma(c(-2.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(c(3.3, 1.0), 0), c(1.0, 0.0));
        assert!((pochhammer(c(1.0, 0.0), 5) - 120.0).norm() < 1e-12);
        assert!((pochhammer(c(-2.1, 0.0), 3) - (-0.231)).norm() < 1e-14);
    }
}

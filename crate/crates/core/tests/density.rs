mod common;

use proptest::prelude::*;
use sinked_fp::density::*;
use sinked_fp::eigen::{continuous_eig_rom, RomIndex};
use sinked_fp::models::{coefficients, weight, ModelSpec};
use sinked_fp::quad::tanh_sinh_par;
use sinked_fp::spectrum::romanovski_norm;

fn q() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn moment(ev: &Evaluator, t: f64, k: i32) -> f64 {
    let h = std::f64::consts::FRAC_PI_2;
    let f = |v: f64| Ok(ev.eval(v.tan(), t)? * v.tan().powi(k) / v.cos().powi(2));
    tanh_sinh_par(-h, h, 1e-9, 5, &f).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn detailed_balance(pick in 0usize..9, u in 0.1..3.0f64, v in 0.1..3.0f64, t in 0.05..1.0f64) {
        let sets = [common::bessel_sets(), common::fs_sets(), common::romanovski_sets()].concat();
        let m = sets[pick];
        let (x, y) = if m.kind == sinked_fp::models::Family::Romanovski { (u - 1.5, 1.5 - v) } else { (u, v) };
        let a = density(&m, x, t, y, &q()).unwrap() * weight(&m, y).unwrap();
        let b = density(&m, y, t, x, &q()).unwrap() * weight(&m, x).unwrap();
        prop_assert!((a - b).abs() < 1e-8 * a.abs().max(b.abs()), "{m:?} {a} vs {b}");
    }
}

#[test]
fn romanovski_combination_is_real() {
    for m in common::romanovski_sets() {
        for mu in [0.3, 1.1, 2.7, 6.2] {
            let r = romanovski_norm(&m, mu).unwrap();
            let y = 0.4;
            let (c1y, c2y) = (
                continuous_eig_rom(&m, RomIndex::One, mu, y).unwrap().value,
                continuous_eig_rom(&m, RomIndex::Two, mu, y).unwrap().value,
            );
            for i in 0..=80 {
                let x = -20.0 + 0.5 * i as f64;
                let c1x = continuous_eig_rom(&m, RomIndex::One, mu, x).unwrap().value;
                let c2x = continuous_eig_rom(&m, RomIndex::Two, mu, x).unwrap().value;
                let terms = [r.rho11 * c1x * c1y, c1x * c2y * r.rho12, c2x * c1y * r.rho21(), r.rho22() * c2x * c2y];
                let total: sinked_fp::ComplexScalar = terms.iter().sum();
                let scale: f64 = terms.iter().map(|t| t.norm()).sum();
                assert!(total.im.abs() <= 1e-9 * scale, "{m:?} mu={mu} x={x}: {total}");
            }
        }
    }
}

#[test]
fn short_time_moments() {
    // Sink-free: d/dt E[x] = q(y), d/dt E[x^2] = 2 s(y) + 2 y q(y) at t = 0.
    let m = ModelSpec::romanovski(-2.7, -2.7, 2.1);
    let y = 0.5;
    let c = coefficients(&m, y).unwrap();
    let ts = [0.05, 0.02, 0.01];
    let ev = Evaluator::new(&m, y, T_MIN, &q(), &default_probes(&m, y)).unwrap();
    let rates: Vec<(f64, f64)> =
        ts.iter().map(|&t| ((moment(&ev, t, 1) - y) / t, (moment(&ev, t, 2) - y * y) / t)).collect();
    let want = (c.q, 2.0 * c.s + 2.0 * y * c.q);
    let err = |i: usize| ((rates[i].0 - want.0).abs(), (rates[i].1 - want.1).abs());
    // errors shrink linearly in t
    for i in 1..3 {
        let (e1, e2) = (err(i), err(i - 1));
        let ratio = ts[i - 1] / ts[i];
        assert!(e1.0 < e2.0 && e1.1 < e2.1, "{rates:?}");
        assert!(e1.0 < 1.5 * e2.0 / ratio && e1.1 < 1.5 * e2.1 / ratio, "{rates:?} vs {want:?}");
    }
}

#[test]
fn sinked_mass_decreases() {
    for (m, y) in [(ModelSpec::romanovski(-0.6, -2.7, 2.1), 0.0), (ModelSpec::bessel(0.5, -6.0), 0.5)] {
        let ev = Evaluator::new(&m, y, 0.05, &q(), &default_probes(&m, y)).unwrap();
        let masses: Vec<f64> = [0.05, 0.1, 0.2, 0.4, 0.8].iter().map(|&t| ev.mass(t).unwrap()).collect();
        assert!(masses.windows(2).all(|w| w[1] < w[0]), "{m:?}: {masses:?}");
    }
}

#[test]
fn mass_tends_to_one() {
    // quadratic extrapolation of mass(t) to t = 0
    let m = ModelSpec::romanovski(-0.6, -2.7, 2.1);
    let ev = Evaluator::new(&m, 0.0, T_MIN, &q(), &default_probes(&m, 0.0)).unwrap();
    let [a, b, c] = [0.01, 0.02, 0.03].map(|t| ev.mass(t).unwrap());
    let at_zero = 3.0 * a - 3.0 * b + c;
    assert!((at_zero - 1.0).abs() < 1e-3, "{at_zero}");
}

#[test]
fn sink_free_mass_is_conserved() {
    for (m, y) in [(ModelSpec::bessel(0.0, -4.0), 1.0), (ModelSpec::fisher_snedecor(-2.0, -2.0, 2.5), 0.7)] {
        for t in [0.02, 0.3, 2.0] {
            let v = total_mass(&m, t, y, &q()).unwrap();
            assert!((v - 1.0).abs() < 1e-6, "{m:?} t={t}: {v}");
        }
    }
}

#[test]
fn grid_metadata() {
    let m = ModelSpec::romanovski(-0.6, -2.7, 2.1);
    let xs: Vec<f64> = (0..41).map(|i| -10.0 + 0.5 * i as f64).collect();
    let grids = density_grids(&m, &xs, &[0.1, 0.3], 0.0, &q()).unwrap();
    assert_eq!(grids.len(), 2);
    assert!(grids[1].mass < grids[0].mass);
    assert!(grids.iter().all(|g| g.values.iter().all(|&v| v >= 0.0) && g.x_nodes == xs));
    assert!(density_grids(&m, &xs, &[0.005], 0.0, &q()).is_err());
}

use sinked_fp::bertalanffy::BRSpec;
use sinked_fp::oracles::mc::moments;
use sinked_fp::oracles::*;

fn laguerre_br() -> BRSpec {
    BRSpec { a: 1.0, b: 0.0, alpha: 0.0, beta: 0.5, zeta: 1.5, omega: 1.0 }
}

fn reflect(n: usize, dt: f64, seed: u64) -> MCConfig {
    MCConfig { crossing: Crossing::Reflect, ..MCConfig::new(n, dt, seed) }
}

#[test]
fn euler_maruyama_dt_halving() {
    let br = laguerre_br();
    let (a, _) = simulate_br_samples(&br, 1.0, 0.3, &reflect(20_000, 2e-3, 11)).unwrap();
    let (b, _) = simulate_br_samples(&br, 1.0, 0.3, &reflect(20_000, 1e-3, 12)).unwrap();
    let (ma, mb) = (moments(&a), moments(&b));
    for k in 0..2 {
        assert!((ma[k].0 - mb[k].0).abs() < 2.0 * mb[k].1, "moment {}: {:?} vs {:?}", k + 1, ma[k], mb[k]);
    }
}

#[test]
fn transformed_and_direct_schemes_agree() {
    for (br, t) in [(laguerre_br(), 0.3), (BRSpec::figure5(), 0.05)] {
        let (xi, _) = simulate_br_samples(&br, 1.0, t, &reflect(20_000, 5e-4, 3)).unwrap();
        let (direct, _) = simulate_br_direct(&br, 1.0, t, &reflect(20_000, 5e-4, 4)).unwrap();
        let (ma, mb) = (moments(&xi), moments(&direct));
        for k in 0..2 {
            let se = ma[k].1.hypot(mb[k].1);
            assert!((ma[k].0 - mb[k].0).abs() < 3.0 * se, "{br:?} moment {}: {:?} vs {:?}", k + 1, ma[k], mb[k]);
        }
    }
}

#[test]
fn histogram_counts_all_samples() {
    let h = simulate_br(&laguerre_br(), 1.0, 0.3, &reflect(10_000, 1e-3, 5)).unwrap();
    assert_eq!(h.counts.iter().sum::<u64>() + h.outside, h.n_samples);
    assert_eq!(h.n_samples, 10_000);
    let area: f64 = h.density().iter().zip(h.edges.windows(2)).map(|((_, d), e)| d * (e[1] - e[0])).sum();
    assert!((area - (1.0 - h.outside as f64 / 1e4)).abs() < 1e-12);
}

fn solve(n_x: usize, n_t: usize) -> Vec<f64> {
    let cfg = FDConfig::new(-8.0, 8.0, n_x, n_t, Stretch::Uniform);
    let start: Vec<f64> = cfg.x_nodes().iter().map(|x| (-x * x / 0.6).exp()).collect();
    let coeffs = |x: f64| (1.0 + 0.1 * x * x, -x, 0.2);
    let g = fd_solve(&coeffs, 0.0, &[0.5], &cfg, &Initial::Profile { t0: 0.0, values: start }).unwrap();
    g[0].values.clone()
}

#[test]
fn fd_second_order_convergence() {
    let (a, b, c) = (solve(201, 50), solve(401, 100), solve(801, 200));
    let d1 = (0..201).map(|i| (a[i] - b[2 * i]).abs()).fold(0.0, f64::max);
    let d2 = (0..201).map(|i| (b[2 * i] - c[4 * i]).abs()).fold(0.0, f64::max);
    let order = (d1 / d2).log2();
    assert!(order >= 1.8, "observed order {order} ({d1:e}, {d2:e})");
}

#[test]
fn fd_mass_with_nonnegative_sink_does_not_grow() {
    let cfg = FDConfig::new(-8.0, 8.0, 400, 200, Stretch::Uniform);
    let coeffs = |x: f64| (1.0, -x, 0.3 * x * x / (1.0 + x * x));
    let g = fd_solve(&coeffs, 0.5, &[0.1, 0.2, 0.4, 0.8], &cfg, &Initial::Delta).unwrap();
    assert!(g.windows(2).all(|w| w[1].mass <= w[0].mass));
}

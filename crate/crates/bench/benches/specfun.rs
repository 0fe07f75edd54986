use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use sinked_fp::specfun::{hyp1f1, hyp2f1, ln_gamma, tricomi_u};
use sinked_fp::ComplexScalar as C64;

fn gamma(c: &mut Criterion) {
    let z = C64::new(2.3, 7.1);
    c.bench_function("ln_gamma complex", |b| b.iter(|| ln_gamma(black_box(z))));
}

fn confluent(c: &mut Criterion) {
    let (a, b_) = (C64::new(0.75, 1.2), C64::new(1.0, 2.4));
    c.bench_function("hyp1f1 x=3", |b| b.iter(|| hyp1f1(black_box(a), b_, 3.0)));
    c.bench_function("tricomi_u x=0.5", |b| b.iter(|| tricomi_u(black_box(a), b_, 0.5)));
    c.bench_function("tricomi_u x=40", |b| b.iter(|| tricomi_u(black_box(a), b_, 40.0)));
}

fn gauss(c: &mut Criterion) {
    let (a, b_, cc) = (C64::new(0.6, 1.1), C64::new(0.6, -1.1), C64::new(1.8, 0.0));
    for z in [0.3, 0.9, -4.0] {
        c.bench_function(&format!("hyp2f1 z={z}"), |b| b.iter(|| hyp2f1(a, b_, cc, black_box(C64::new(z, 0.0)))));
    }
}

criterion_group!(benches, gamma, confluent, gauss);
criterion_main!(benches);

//! Criterion benchmarks for the hot paths: Novikov arithmetic, Jordan
//! decomposition, Ext computation, and the σ-area quadrature.

use criterion::{criterion_group, criterion_main, Criterion};
use floermod_core::curves::{sigma_area, PlaneCurve, SigmaDensity};
use floermod_core::kumod::{ext, jordan_decompose, make_s, GradedKuModule};
use floermod_core::novikov::NovikovNum;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn novikov_mul(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let x = NovikovNum::random(&mut rng, 6, -4, 8, 4);
    let y = NovikovNum::random(&mut rng, 6, -4, 8, 4);
    c.bench_function("novikov_mul", |b| b.iter(|| std::hint::black_box(x.mul(&y))));
}

fn novikov_invert(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let x = NovikovNum::random(&mut rng, 6, -4, 8, 4);
    c.bench_function("novikov_invert", |b| {
        b.iter(|| std::hint::black_box(x.invert().unwrap()))
    });
}

fn jordan_random(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let m = GradedKuModule::random(3, 3, 3, &mut rng);
    c.bench_function("jordan_decompose_3x3", |b| {
        b.iter(|| std::hint::black_box(jordan_decompose(&m).unwrap()))
    });
}

fn ext_pair(c: &mut Criterion) {
    let alpha = NovikovNum::monomial(num_rational::Ratio::new(1, 2), Complex64::new(1.0, 0.0));
    let beta = NovikovNum::monomial(num_rational::Ratio::new(1, 3), Complex64::new(1.0, 0.0));
    let a = make_s(3, &alpha, 0);
    let b2 = make_s(3, &beta, 1);
    c.bench_function("ext_s_pair", |b| {
        b.iter(|| std::hint::black_box(ext(&a, &b2).unwrap()))
    });
}

fn sigma_area_circle(c: &mut Criterion) {
    let curve = PlaneCurve::circle(Complex64::new(0.0, 0.0), 2.0).unwrap();
    c.bench_function("sigma_area_circle", |b| {
        b.iter(|| std::hint::black_box(sigma_area(&curve, SigmaDensity::sigma()).unwrap()))
    });
}

criterion_group!(
    benches,
    novikov_mul,
    novikov_invert,
    jordan_random,
    ext_pair,
    sigma_area_circle
);
criterion_main!(benches);

use criterion::{criterion_group, BenchmarkId, Criterion};
use mixid::estimate::{hsic_biased, KernelSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sample(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
    let y = x.iter().map(|v| v * v + rng.random_range(-1.0..1.0)).collect();
    (x, y)
}

fn bench_hsic(c: &mut Criterion) {
    let mut group = c.benchmark_group("hsic");
    for n in [250, 1000] {
        let (x, y) = sample(n);
        let poly = KernelSpec::default();
        group.bench_with_input(BenchmarkId::new("poly2", n), &n, |b, _| {
            b.iter(|| hsic_biased(&x, &y, &poly, &poly).unwrap())
        });
        let rbf = KernelSpec::rbf_median();
        group.bench_with_input(BenchmarkId::new("rbf", n), &n, |b, _| {
            b.iter(|| hsic_biased(&x, &y, &rbf, &rbf).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_hsic);

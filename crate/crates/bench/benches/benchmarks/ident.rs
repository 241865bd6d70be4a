use criterion::{criterion_group, BenchmarkId, Criterion};
use mixid::ident::{is_matrix_identifiable, v_rank};
use mixid::simulate::random_admg;

fn bench_v_rank(c: &mut Criterion) {
    let mut group = c.benchmark_group("v_rank");
    for p in [10, 25, 50] {
        let g = random_admg(p, 0.3, 1).unwrap();
        let v = g.causal_order().unwrap()[p - 1];
        let pa = g.pa(v);
        group.bench_with_input(BenchmarkId::from_parameter(p), &p, |b, _| b.iter(|| v_rank(&g, v, &pa).unwrap()));
    }
    group.finish();
}

fn bench_report(c: &mut Criterion) {
    let mut group = c.benchmark_group("matrix_report");
    for p in [10, 25] {
        let g = random_admg(p, 0.3, 2).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(p), &p, |b, _| {
            b.iter(|| is_matrix_identifiable(&g).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_v_rank, bench_report);

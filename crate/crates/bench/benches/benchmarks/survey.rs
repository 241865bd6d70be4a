use criterion::{criterion_group, Criterion};
use mixid::survey::survey_density;

fn bench_survey(c: &mut Criterion) {
    let mut group = c.benchmark_group("survey_row");
    group.sample_size(10);
    group.bench_function("p25_d0.3_reps50", |b| b.iter(|| survey_density(25, 0.3, 50, 0).unwrap()));
    group.finish();
}

criterion_group!(benches, bench_survey);

use criterion::{criterion_group, Criterion};
use mixid::estimate::{fit, regression_init, FitOptions, InitKind, KernelSpec, Objective};
use mixid::fixtures;
use mixid::simulate::{generate_data, sample_errors, sample_parameters, ErrorModel};

fn bench_objective(c: &mut Criterion) {
    let g = fixtures::four_node();
    let lam = sample_parameters(&g, 4).unwrap();
    let x = generate_data(&g, &lam, &sample_errors(&g, &ErrorModel::laplace(), 1000, 4).unwrap()).unwrap();
    let spec = KernelSpec::default();
    let obj = Objective::new(&g, &x, &spec, &lam).unwrap();
    c.bench_function("objective_gradient/four_node/1000", |b| b.iter(|| obj.value_and_gradient(&lam)));

    let g = fixtures::iv();
    let lam = sample_parameters(&g, 5).unwrap();
    let x = generate_data(&g, &lam, &sample_errors(&g, &ErrorModel::laplace(), 1000, 5).unwrap()).unwrap();
    let init = regression_init(&g, &x).unwrap();
    c.bench_function("fit/iv/1000", |b| {
        b.iter(|| fit(&g, &x, &spec, &init, InitKind::Regression, &FitOptions::default()).unwrap())
    });
}

criterion_group!(benches, bench_objective);

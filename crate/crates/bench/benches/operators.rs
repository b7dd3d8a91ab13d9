use criterion::{criterion_group, criterion_main, Criterion};
use kinetic_core::field::{GaussianBump, GaussianMixture};
use kinetic_core::homog::solver::LandauGridOperator;
use kinetic_core::*;
use std::hint::black_box;

fn bumps() -> GaussianMixture {
    GaussianMixture::new(vec![
        GaussianBump { weight: 0.6, center: vec![0.5, 0.0, 0.0], width: 1.0 },
        GaussianBump { weight: 0.4, center: vec![-0.4, 0.3, 0.0], width: 0.9 },
    ])
    .unwrap()
}

fn collision_operators(c: &mut Criterion) {
    let q = QuadratureScheme::default();
    let f = bumps();
    let v = [0.4, -0.3, 0.2];
    let landau = KernelSpec::landau(3, -3.0).unwrap();
    let boltzmann = KernelSpec::boltzmann(3, 0.0, AngularKernel::Constant(1.0)).unwrap();
    let mut group = c.benchmark_group("operators");
    group.sample_size(10);
    group.bench_function("landau_coulomb", |b| b.iter(|| q_landau(&f, black_box(&v), &landau, &q).unwrap()));
    group.bench_function("boltzmann_sigma", |b| b.iter(|| q_boltzmann_sigma(&f, black_box(&v), &boltzmann, &q).unwrap()));
    group.bench_function("boltzmann_carleman", |b| {
        b.iter(|| q_boltzmann_carleman(&f, black_box(&v), &boltzmann, &q).unwrap())
    });
    group.finish();
}

fn thresholds(c: &mut Criterion) {
    let q = QuadratureScheme::default();
    let k = KernelSpec::boltzmann(3, 0.0, AngularKernel::CosSquaredHalf).unwrap();
    let mut group = c.benchmark_group("thresholds");
    group.sample_size(10);
    group.bench_function("hyperplane_integral", |b| {
        b.iter(|| boltzmann_hyperplane_integral(black_box(8.0), &[0.1, 0.0, 0.0], &k, &q).unwrap())
    });
    group.bench_function("landau_delta_search", |b| b.iter(|| landau_delta_search(black_box(6.0), 3, 0.0, 1e-6).unwrap()));
    group.finish();
}

fn grid_operator(c: &mut Criterion) {
    let g = GridField::sample(&bumps(), 16, 8.0).unwrap();
    let op = LandauGridOperator::new(&g, -3.0).unwrap();
    let mut group = c.benchmark_group("homog");
    group.sample_size(10);
    group.bench_function("evaluate_16", |b| b.iter(|| op.evaluate(black_box(&g.values))));
    group.finish();
}

criterion_group!(benches, collision_operators, thresholds, grid_operator);
criterion_main!(benches);

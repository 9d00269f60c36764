use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;
use zlab_core::solver::{reduce_data, step_reduced, SolverConfig, SolverState};
use zlab_core::trilinear::{
    band_trilinear, counterexample_sweep, make_dyadic_random_field, trilinear_i, BandField,
    Counterexample, ExponentCase, Footprint, Surface,
};
use zlab_core::{dy, Complex64, Flavor, FrequencyGrid, SpaceTimeGrid, SpatialField};

fn lattice_trilinear(c: &mut Criterion) {
    let mut group = c.benchmark_group("trilinear_i");
    for n in [16usize, 32] {
        let grid = SpaceTimeGrid::new(FrequencyGrid::new(4.0, n).unwrap(), 4.0, n).unwrap();
        let f = make_dyadic_random_field(grid, dy(2), dy(1), Flavor::WPlus, 1).unwrap();
        let g1 = make_dyadic_random_field(grid, dy(2), dy(1), Flavor::S, 2).unwrap();
        let g2 = make_dyadic_random_field(grid, dy(1), dy(1), Flavor::S, 3).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| trilinear_i(black_box(&f), &g1, &g2).unwrap())
        });
    }
    group.finish();
}

fn band(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut group = c.benchmark_group("band_trilinear");
    for dxi in [1.0, 0.5] {
        let f = BandField::random(&mut rng, Footprint::Annulus(dy(4)), Surface::WavePlus, dy(1), 1.0)
            .sample(dxi)
            .unwrap();
        let g1 = BandField::random(&mut rng, Footprint::Annulus(dy(4)), Surface::Schrodinger, dy(1), 1.0)
            .sample(dxi)
            .unwrap();
        let g2 = BandField::random(&mut rng, Footprint::Annulus(dy(4)), Surface::Schrodinger, dy(1), 1.0)
            .sample(dxi)
            .unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(dxi), &dxi, |b, _| {
            b.iter(|| band_trilinear(black_box(&f), &g1, &g2).unwrap())
        });
    }
    group.finish();
}

fn solver_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("strang_step");
    for n in [64usize, 256] {
        let grid = FrequencyGrid::new(16.0, n).unwrap();
        let u0 = SpatialField::from_physical_fn(grid, |x, y| {
            Complex64::from_polar((-(x * x + y * y) / 2.0).exp(), 0.5 * x)
        });
        let n0 = SpatialField::from_physical_fn(grid, |x, y| Complex64::new(0.5 * (-(x * x + y * y)).exp(), 0.0));
        let (u, v) = reduce_data(&u0, &n0, &SpatialField::zeros(grid)).unwrap();
        let cfg = SolverConfig::new(grid, 1e-4);
        let state = SolverState { u, v, t: 0.0 };
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| step_reduced(&cfg, black_box(&state), 1e-4))
        });
    }
    group.finish();
}

fn counterexamples(c: &mut Criterion) {
    let case = ExponentCase::new(-1.0, 0.0, -0.5);
    let scales: Vec<_> = [16, 32, 64, 128, 256].into_iter().map(dy).collect();
    let mut group = c.benchmark_group("counterexample_sweep");
    group.sample_size(10);
    for (name, which) in [("c1", Counterexample::C1), ("c2", Counterexample::C2)] {
        group.bench_function(name, |b| b.iter(|| counterexample_sweep(which, black_box(&case), &scales).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, lattice_trilinear, band, solver_step, counterexamples);
criterion_main!(benches);

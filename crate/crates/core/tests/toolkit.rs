use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use zlab_core::cutoff::{beta_angular, psi, psi_n};
use zlab_core::projectors::{
    admissible_bands, project_angular, project_angular_st, project_dyadic, project_modulation,
    whitney_coverage, whitney_tiles,
};
use zlab_core::{dy, AngularSector, DyadicScale, Flavor, FrequencyGrid, SpaceTimeField, SpaceTimeGrid, SpatialField};

fn random_spatial(seed: u64, grid: FrequencyGrid) -> SpatialField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..grid.len())
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    SpatialField::from_values(grid, values).unwrap()
}

fn random_st(seed: u64, grid: SpaceTimeGrid) -> SpaceTimeField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..grid.len())
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    SpaceTimeField::from_values(grid, values).unwrap()
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn sup(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

#[test]
fn dyadic_partition_of_unity() {
    let n_max = 20u32;
    let top = (1u64 << n_max) as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut worst = 0.0f64;
    for i in 0..100_000 {
        // Half the samples uniform, half log-uniform so every band is hit.
        let r = if i % 2 == 0 {
            rng.random_range(0.0..top)
        } else {
            (2f64).powf(rng.random_range(-4.0..n_max as f64))
        };
        let s: f64 = (0..=n_max).map(|k| psi_n(DyadicScale::from_exponent(k), r)).sum();
        worst = worst.max((s - 1.0).abs());
    }
    assert!(worst <= 1e-12, "{worst}");
}

#[test]
fn angular_partition_of_unity() {
    for a in [4u64, 16, 64] {
        let mut worst = 0.0f64;
        for i in 0..10_000 {
            let th = -PI + 2.0 * PI * (i as f64 + 0.5) / 10_000.0;
            let s: f64 = (0..a as i64).map(|j| beta_angular(dy(a), j, th).unwrap()).sum();
            worst = worst.max((s - 1.0).abs());
        }
        assert!(worst <= 1e-12, "A={a}: {worst}");
    }
}

#[test]
fn psi_is_smooth_bump() {
    for i in 0..2000 {
        let r = -3.0 + 6.0 * i as f64 / 2000.0;
        let v = psi(r);
        assert!((0.0..=1.0).contains(&v));
        assert_eq!(v, psi(-r));
    }
}

#[test]
fn dyadic_projectors_reconstruct_and_respect_supports() {
    let grid = FrequencyGrid::new(2.0, 64).unwrap();
    let bands = admissible_bands(&grid);
    for seed in 0..100 {
        let u = random_spatial(seed, grid);
        let mut sum = SpatialField::zeros(grid);
        let mut energy = 0.0;
        for &n in &bands {
            let p = project_dyadic(&u, n).unwrap();
            energy += p.l2_norm().powi(2);
            if n.exponent() > 0 {
                let nf = n.value_f64();
                for (i, v) in p.values.iter().enumerate() {
                    let r = grid.abs_xi(i);
                    if r <= nf / 2.0 || r >= 2.0 * nf {
                        assert_eq!(*v, Complex64::new(0.0, 0.0));
                    }
                }
            }
            sum = sum.add(&p).unwrap();
        }
        assert!(max_diff(&sum.values, &u.values) <= 1e-12 * sup(&u.values));
        let total = u.l2_norm().powi(2);
        assert!(energy >= 0.5 * total && energy <= total * (1.0 + 1e-12), "{energy} vs {total}");
    }
}

#[test]
fn dyadic_projector_examples() {
    let grid = FrequencyGrid::new(2.0, 64).unwrap();
    let constant = SpatialField::from_fn(grid, |a, b| {
        if a == 0.0 && b == 0.0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }
    });
    assert_eq!(project_dyadic(&constant, dy(1)).unwrap().values, constant.values);
    let mode = SpatialField::from_fn(grid, |a, b| {
        if a == 4.0 && b == 0.0 { Complex64::new(2.0, -1.0) } else { Complex64::new(0.0, 0.0) }
    });
    assert_eq!(project_dyadic(&mode, dy(4)).unwrap().values, mode.values);
    assert!(project_dyadic(&mode, dy(256)).is_err());
}

#[test]
fn angular_projectors_reconstruct() {
    let grid = FrequencyGrid::new(2.0, 32).unwrap();
    for a in [4u64, 16, 64] {
        let u = random_spatial(a, grid);
        let mut sum = SpatialField::zeros(grid);
        for j in 0..a {
            let q = project_angular(&u, AngularSector::new(dy(a), j).unwrap());
            let qq = project_angular(&q, AngularSector::new(dy(a), j).unwrap());
            assert!(qq.l2_norm() <= q.l2_norm());
            sum = sum.add(&q).unwrap();
        }
        assert!(max_diff(&sum.values, &u.values) <= 1e-12 * sup(&u.values));
    }
    // On the positive xi1 axis the three sectors around 0 share the mass equally.
    let axis = SpatialField::from_fn(grid, |a, b| {
        if b == 0.0 && a > 0.0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }
    });
    let q0 = project_angular(&axis, AngularSector::new(dy(16), 0).unwrap());
    assert!(max_diff(&q0.values, &axis.scale(Complex64::new(1.0 / 3.0, 0.0)).values) < 1e-15);
    let mut near = SpatialField::zeros(grid);
    for j in [15, 0, 1] {
        near = near.add(&project_angular(&axis, AngularSector::new(dy(16), j).unwrap())).unwrap();
    }
    assert!(max_diff(&near.values, &axis.values) < 1e-15);
    assert!(AngularSector::new(dy(16), 16).is_err());
}

#[test]
fn modulation_projectors_partition_and_conjugate() {
    let grid = SpaceTimeGrid::new(FrequencyGrid::new(2.0, 16).unwrap(), 4.0, 16).unwrap();
    let w = random_st(3, grid);
    for flavor in [Flavor::S, Flavor::WPlus, Flavor::WMinus, Flavor::WFull] {
        let mut sum = SpaceTimeField::zeros(grid);
        for k in 0..12 {
            sum = sum.add(&project_modulation(&w, DyadicScale::from_exponent(k), flavor)).unwrap();
        }
        assert!(max_diff(&sum.values, &w.values) <= 1e-12 * sup(&w.values), "{flavor:?}");
    }
    // Nyquist planes have no mirror image on the lattice.
    let mut w = w;
    for i in 0..w.values.len() {
        if grid.on_nyquist(i) {
            w.values[i] = Complex64::new(0.0, 0.0);
        }
    }
    for k in 0..6 {
        let l = DyadicScale::from_exponent(k);
        let a = project_modulation(&w.conjugate(), l, Flavor::WMinus);
        let b = project_modulation(&w, l, Flavor::WPlus).conjugate();
        assert!(max_diff(&a.values, &b.values) < 1e-14);
    }
    let on_surface = SpaceTimeField::from_fn(grid, |a, b, t| {
        if (t + a * a + b * b).abs() < 1e-12 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }
    });
    let p = project_modulation(&on_surface, dy(1), Flavor::S);
    assert_eq!(p.values, on_surface.values);
    let sect = project_angular_st(&w, AngularSector::new(dy(4), 1).unwrap());
    assert!(sect.l2_norm() <= w.l2_norm());
}

#[test]
fn whitney_tiles_cover_direction_pairs() {
    for m in [64u64, 128] {
        let c = whitney_coverage(dy(m), 360).unwrap();
        assert_eq!(c.uncovered, 0, "M={m}");
        assert!(c.max_multiplicity <= 8, "M={m}: {}", c.max_multiplicity);
    }
    let t = whitney_tiles(dy(128)).unwrap();
    assert!(t.iter().any(|x| x.a == 64) && t.iter().any(|x| x.a == 128));
}

proptest! {
    #[test]
    fn dyadic_pieces_sum_to_one(r in 0.0f64..1e6) {
        let s: f64 = (0..=21).map(|k| psi_n(DyadicScale::from_exponent(k), r)).sum();
        prop_assert!((s - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn angular_pieces_sum_to_one(th in -PI..PI, e in 2u32..8) {
        let a = 1u64 << e;
        let s: f64 = (0..a as i64).map(|j| beta_angular(dy(a), j, th).unwrap()).sum();
        prop_assert!((s - 1.0).abs() <= 1e-12);
    }
}

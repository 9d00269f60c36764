use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zlab_core::trilinear::{block_weight, make_dyadic_random_field, trilinear_i, trilinear_i_direct};
use zlab_core::{dy, Flavor, FrequencyGrid, SpaceTimeField, SpaceTimeGrid, ZlabError};

fn small_grid() -> SpaceTimeGrid {
    SpaceTimeGrid::new(FrequencyGrid::new(3.0, 8).unwrap(), 2.5, 8).unwrap()
}

fn random_field<R: Rng>(rng: &mut R, grid: SpaceTimeGrid) -> SpaceTimeField {
    let values = (0..grid.len())
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    SpaceTimeField::from_values(grid, values).unwrap()
}

fn without_nyquist(mut w: SpaceTimeField) -> SpaceTimeField {
    for i in 0..w.values.len() {
        if w.grid.on_nyquist(i) {
            w.values[i] = Complex64::new(0.0, 0.0);
        }
    }
    w
}

#[test]
fn fast_functional_matches_direct_sum() {
    let grid = small_grid();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..20 {
        let f = random_field(&mut rng, grid);
        let g1 = random_field(&mut rng, grid);
        let g2 = random_field(&mut rng, grid);
        let fast = trilinear_i(&f, &g1, &g2).unwrap();
        let direct = trilinear_i_direct(&f, &g1, &g2).unwrap();
        assert!((fast - direct).norm() <= 1e-10 * direct.norm(), "{fast} vs {direct}");
    }
}

#[test]
fn zero_slot_gives_zero() {
    let grid = small_grid();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = random_field(&mut rng, grid);
    let g = random_field(&mut rng, grid);
    let z = SpaceTimeField::zeros(grid);
    assert_eq!(trilinear_i(&f, &z, &g).unwrap().norm(), 0.0);
}

#[test]
fn mismatched_grids_are_rejected() {
    let a = SpaceTimeField::zeros(small_grid());
    let b = SpaceTimeField::zeros(SpaceTimeGrid::new(FrequencyGrid::new(3.0, 8).unwrap(), 2.5, 16).unwrap());
    assert!(matches!(trilinear_i(&a, &a, &b), Err(ZlabError::GridMismatch(_))));
}

#[test]
fn random_band_fields_are_normalised_supported_and_deterministic() {
    let grid = SpaceTimeGrid::new(FrequencyGrid::new(4.0, 32).unwrap(), 4.0, 32).unwrap();
    for flavor in [Flavor::S, Flavor::WPlus, Flavor::WMinus] {
        let w = make_dyadic_random_field(grid, dy(2), dy(2), flavor, 9).unwrap();
        assert!((w.l2_norm() - 1.0).abs() < 1e-12);
        for (i, v) in w.values.iter().enumerate() {
            let (a, b, t) = grid.zeta(i);
            if block_weight(dy(2), dy(2), flavor, a.hypot(b), t) == 0.0 || grid.on_nyquist(i) {
                assert_eq!(*v, Complex64::new(0.0, 0.0));
            }
        }
        let again = make_dyadic_random_field(grid, dy(2), dy(2), flavor, 9).unwrap();
        assert_eq!(w.values, again.values);
    }
}

#[test]
fn empty_band_is_reported() {
    // Frequencies near 64 do not exist on a grid reaching 4.
    let grid = SpaceTimeGrid::new(FrequencyGrid::new(4.0, 32).unwrap(), 4.0, 32).unwrap();
    assert!(make_dyadic_random_field(grid, dy(64), dy(1), Flavor::S, 0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn functional_is_linear_in_each_slot(seed in any::<u64>(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let grid = small_grid();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_field(&mut rng, grid);
        let g1 = random_field(&mut rng, grid);
        let g2 = random_field(&mut rng, grid);
        let h = random_field(&mut rng, grid);
        let c = Complex64::new(re, im);
        let base = trilinear_i(&f, &g1, &g2).unwrap();
        let scale = base.norm().max(1e-300);
        let scaled = trilinear_i(&f, &g1.scale(c), &g2).unwrap();
        prop_assert!((scaled - c * base).norm() <= 1e-10 * scale * (1.0 + c.norm()));
        let summed = trilinear_i(&f.add(&h).unwrap(), &g1, &g2).unwrap();
        let parts = base + trilinear_i(&h, &g1, &g2).unwrap();
        prop_assert!((summed - parts).norm() <= 1e-10 * (base.norm() + parts.norm() + 1.0));
        let doubled = trilinear_i(&f, &g1, &g2.scale(Complex64::new(2.0, 0.0))).unwrap();
        prop_assert!((doubled - 2.0 * base).norm() <= 1e-10 * scale);
    }

    #[test]
    fn simultaneous_conjugation_preserves_modulus(seed in any::<u64>()) {
        let grid = small_grid();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = without_nyquist(random_field(&mut rng, grid));
        let g1 = without_nyquist(random_field(&mut rng, grid));
        let g2 = without_nyquist(random_field(&mut rng, grid));
        let a = trilinear_i(&f, &g1, &g2).unwrap();
        let b = trilinear_i(&f.conjugate(), &g1.conjugate(), &g2.conjugate()).unwrap();
        prop_assert!((a.norm() - b.norm()).abs() <= 1e-10 * a.norm().max(1e-300));
        prop_assert!((b - a.conj()).norm() <= 1e-10 * a.norm().max(1e-300));
    }
}

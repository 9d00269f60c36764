use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zlab_core::trilinear::{
    band_product_norm, band_trilinear, interval_convolution, BandField, Footprint, SampledBand,
    Surface,
};
use zlab_core::{dy, AngularSector};

fn overlap(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.1.min(b.1) - a.0.max(b.0)).max(0.0)
}

/// Profile value at s.
fn prof(p: &[(f64, f64, f64)], s: f64) -> f64 {
    p.iter()
        .filter(|q| s > q.0 && s < q.1)
        .map(|q| q.2)
        .sum()
}

/// int b1(s1) b2(s2) b0(s1 - s2 - om) by exact inner overlap and midpoint outer rule.
fn kernel_oracle(p0: &[(f64, f64, f64)], p1: &[(f64, f64, f64)], p2: &[(f64, f64, f64)], om: f64) -> f64 {
    let lo = p1.iter().map(|q| q.0).fold(f64::INFINITY, f64::min);
    let hi = p1.iter().map(|q| q.1).fold(f64::NEG_INFINITY, f64::max);
    let m = 4000;
    let h = (hi - lo) / m as f64;
    let mut acc = 0.0;
    for k in 0..m {
        let s1 = lo + (k as f64 + 0.5) * h;
        let w1 = prof(p1, s1);
        if w1 == 0.0 {
            continue;
        }
        // s2 in piece of b2 and s1 - s2 - om in piece of b0, i.e. s2 in [s1 - om - hi0, s1 - om - lo0].
        let mut inner = 0.0;
        for a in p2 {
            for b in p0 {
                inner += a.2 * b.2 * overlap((a.0, a.1), (s1 - om - b.1, s1 - om - b.0));
            }
        }
        acc += w1 * inner * h;
    }
    acc
}

fn collect(b: &SampledBand, reach: i64) -> Vec<(i64, i64, f64)> {
    let mut out = Vec::new();
    for i in -reach..=reach {
        for j in -reach..=reach {
            let a = b.at(i, j);
            if a != 0.0 {
                out.push((i, j, a));
            }
        }
    }
    out
}

#[test]
fn interval_convolution_matches_quadrature() {
    let ints = [(-1.0, 2.0), (0.5, 1.5), (-3.0, -2.5)];
    for &x in &[-3.2, -2.0, -1.1, 0.0, 0.7] {
        // Direct double integral of the triple convolution.
        let m = 1500;
        let (a, b) = ints[0];
        let h = (b - a) / m as f64;
        let mut acc = 0.0;
        for k in 0..m {
            let s = a + (k as f64 + 0.5) * h;
            // 1_{I2} * 1_{I3} at x - s is an overlap length.
            let t = x - s;
            acc += overlap(ints[1], (t - ints[2].1, t - ints[2].0)) * h;
        }
        let exact = interval_convolution(&ints, x);
        assert!((exact - acc).abs() < 1e-5, "x={x}: {exact} vs {acc}");
    }
    // Two unit intervals give the triangle of height 1.
    assert!((interval_convolution(&[(0.0, 1.0), (0.0, 1.0)], 1.0) - 1.0).abs() < 1e-15);
    assert!((interval_convolution(&[(0.0, 1.0), (0.0, 1.0)], 0.5) - 0.5).abs() < 1e-15);
    assert_eq!(interval_convolution(&[(0.0, 1.0), (0.0, 1.0)], 2.5), 0.0);
}

#[test]
fn trilinear_matches_brute_force_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let dxi = 0.5;
    for (l, l1, l2) in [(1u64, 1u64, 1u64), (4, 1, 2), (2, 8, 1)] {
        let f = BandField::random(&mut rng, Footprint::Annulus(dy(2)), Surface::WavePlus, dy(l), 1.0)
            .sample(dxi)
            .unwrap();
        let g1 = BandField::random(&mut rng, Footprint::Annulus(dy(2)), Surface::Schrodinger, dy(l1), 1.0)
            .sample(dxi)
            .unwrap();
        let g2 = BandField::random(&mut rng, Footprint::Annulus(dy(1)), Surface::Schrodinger, dy(l2), 1.0)
            .sample(dxi)
            .unwrap();
        let fast = band_trilinear(&f, &g1, &g2).unwrap();
        let p1 = collect(&g1, 20);
        let p2 = collect(&g2, 20);
        let mut brute = 0.0;
        for &(i1, j1, a1) in &p1 {
            for &(i2, j2, a2) in &p2 {
                let a0 = f.at(i1 - i2, j1 - j2);
                if a0 == 0.0 {
                    continue;
                }
                let (x1, y1) = (i1 as f64 * dxi, j1 as f64 * dxi);
                let (x2, y2) = (i2 as f64 * dxi, j2 as f64 * dxi);
                let om = Surface::Schrodinger.h(x1, y1)
                    - Surface::Schrodinger.h(x2, y2)
                    - Surface::WavePlus.h(x1 - x2, y1 - y2);
                let k = kernel_oracle(&f.pieces, &g1.pieces, &g2.pieces, om);
                brute += a0 * a1 * a2 * k;
            }
        }
        brute *= dxi.powi(4);
        assert!(brute > 0.0);
        assert!(
            ((fast - brute) / brute).abs() < 2e-3,
            "L=({l},{l1},{l2}): fast {fast} vs brute {brute}"
        );
    }
}

#[test]
fn product_norm_matches_direct_tau_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let dxi = 0.5;
    let cases = [
        (Footprint::Annulus(dy(1)), Surface::Schrodinger, 1u64, Footprint::Annulus(dy(2)), Surface::Schrodinger, 2u64),
        (
            Footprint::Cube { center: (1.0, 0.5), side: 2.0 },
            Surface::WaveMinus,
            1,
            Footprint::Annulus(dy(2)),
            Surface::Schrodinger,
            1,
        ),
    ];
    for (ff, fs, fl, gf, gs, gl) in cases {
        let f = BandField::random(&mut rng, ff, fs, dy(fl), 1.0).sample(dxi).unwrap();
        let g = BandField::random(&mut rng, gf, gs, dy(gl), 1.0).sample(dxi).unwrap();
        let fast = band_product_norm(&f, &g).unwrap();
        let pf = collect(&f, 20);
        let pg = collect(&g, 20);
        // B = b_f * b_g through overlap lengths.
        let bconv = |x: f64| -> f64 {
            let mut s = 0.0;
            for a in &f.pieces {
                for b in &g.pieces {
                    s += a.2 * b.2 * overlap((a.0, a.1), (x - b.1, x - b.0));
                }
            }
            s
        };
        let mut outputs = std::collections::BTreeMap::<(i64, i64), Vec<(f64, f64)>>::new();
        for &(i1, j1, a) in &pf {
            for &(i2, j2, b) in &pg {
                let phi = fs.h(i1 as f64 * dxi, j1 as f64 * dxi) + gs.h(i2 as f64 * dxi, j2 as f64 * dxi);
                outputs.entry((i1 + i2, j1 + j2)).or_default().push((phi, a * b));
            }
        }
        let mut total = 0.0;
        let h = 0.005;
        for list in outputs.values() {
            let pmin = list.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
            let pmax = list.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
            // G(tau) = sum c B(tau + phi), tau in [-pmax - 20, -pmin + 20].
            let t0 = -pmax - 20.0;
            let m = ((pmax - pmin + 40.0) / h) as usize;
            for k in 0..m {
                let tau = t0 + (k as f64 + 0.5) * h;
                let g: f64 = list.iter().map(|(phi, c)| c * bconv(tau + phi)).sum();
                total += g * g * h;
            }
        }
        let brute = (total * dxi.powi(6) / (2.0 * std::f64::consts::PI).powi(3)).sqrt();
        assert!(
            ((fast - brute) / brute).abs() < 5e-3,
            "fast {fast} vs brute {brute}"
        );
    }
}

#[test]
fn sampled_fields_have_unit_norm_and_zero_slots_vanish() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let sector = AngularSector::new(dy(8), 1).unwrap();
    let f = BandField::random(&mut rng, Footprint::Annulus(dy(2)), Surface::WaveMinus, dy(2), 1.0)
        .sample(0.25)
        .unwrap();
    let g = BandField::random(&mut rng, Footprint::Sector(dy(4), sector), Surface::Schrodinger, dy(1), 1.0)
        .sample(0.25)
        .unwrap();
    assert!((f.l2_norm() - 1.0).abs() < 1e-12);
    assert!((g.l2_norm() - 1.0).abs() < 1e-12);
    let z = g.scaled(0.0);
    assert_eq!(band_trilinear(&f, &z, &g).unwrap(), 0.0);
    assert_eq!(band_product_norm(&f, &z).unwrap(), 0.0);
}

#[test]
fn mismatched_spacings_are_rejected() {
    let a = BandField::new(Footprint::Annulus(dy(1)), Surface::Schrodinger, dy(1))
        .sample(0.5)
        .unwrap();
    let b = BandField::new(Footprint::Annulus(dy(1)), Surface::Schrodinger, dy(1))
        .sample(0.25)
        .unwrap();
    assert!(band_product_norm(&a, &b).is_err());
    assert!(band_trilinear(&a, &a, &b).is_err());
}

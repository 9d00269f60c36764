use num_complex::Complex64;
use std::f64::consts::PI;
use zlab_core::dy;
use zlab_core::trilinear::{
    counterexample_c1, counterexample_c2, counterexample_sweep, duhamel_lower_bound_1,
    duhamel_lower_bound_2, interval_image, interval_overlap_convolution, localize_map,
    phase_integral, trilinear_i_boxes, weighted_norm, BoxSpec, CharacteristicField,
    Counterexample, ExponentCase, WeightSpec,
};
use zlab_core::{DyadicScale, Flavor};

fn scales(lo: u32, hi: u32) -> Vec<DyadicScale> {
    (lo..=hi).map(DyadicScale::from_exponent).collect()
}

fn bracket(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

#[test]
fn unit_box_self_convolution_is_a_triangle() {
    let u = (-0.5, 0.5);
    assert_eq!(interval_overlap_convolution(u, u, 0.0), 1.0);
    assert!((interval_overlap_convolution(u, u, 0.25) - 0.75).abs() < 1e-15);
    assert_eq!(interval_overlap_convolution(u, u, 1.5), 0.0);
}

#[test]
fn disjoint_boxes_give_zero_functional() {
    let b = |c: [f64; 3]| CharacteristicField::indicator(BoxSpec::new(c, [1.0; 3]).unwrap());
    // f(z1 - z2) needs z1 - z2 near 10, but g1 - g2 sits near 0.
    let i = trilinear_i_boxes(&b([10.0, 0.0, 0.0]), &b([0.0; 3]), &b([0.0; 3]));
    assert_eq!(i, Complex64::new(0.0, 0.0));
}

#[test]
fn box_functional_matches_riemann_sum() {
    let f = CharacteristicField::new(vec![(
        BoxSpec::new([0.3, -0.2, 1.0], [1.0, 0.8, 2.0]).unwrap(),
        Complex64::new(1.0, 0.5),
    )])
    .unwrap();
    let g1 = CharacteristicField::indicator(BoxSpec::new([0.5, 0.0, 0.5], [0.6, 1.2, 1.5]).unwrap());
    let g2 = CharacteristicField::new(vec![(
        BoxSpec::new([0.1, 0.3, -0.4], [0.9, 0.7, 1.1]).unwrap(),
        Complex64::new(-2.0, 0.0),
    )])
    .unwrap();
    // Per-axis double midpoint sums of chi_f(x1 - x2) chi_1(x1) chi_2(x2).
    let m = 1200;
    let mut prod = 1.0;
    for d in 0..3 {
        let i1 = g1.boxes[0].0.interval(d);
        let i2 = g2.boxes[0].0.interval(d);
        let fi = f.boxes[0].0.interval(d);
        let (h1, h2) = ((i1.1 - i1.0) / m as f64, (i2.1 - i2.0) / m as f64);
        let mut acc = 0.0;
        for a in 0..m {
            let x1 = i1.0 + (a as f64 + 0.5) * h1;
            for b in 0..m {
                let x2 = i2.0 + (b as f64 + 0.5) * h2;
                if x1 - x2 >= fi.0 && x1 - x2 <= fi.1 {
                    acc += h1 * h2;
                }
            }
        }
        prod *= acc;
    }
    let expected = f.boxes[0].1 * g2.boxes[0].1 * prod;
    let got = trilinear_i_boxes(&f, &g1, &g2);
    assert!((got - expected).norm() < 2e-3 * expected.norm(), "{got} vs {expected}");
}

#[test]
fn flat_weight_norm_is_root_volume() {
    let b = BoxSpec::new([3.0, 1.0, -2.0], [0.5, 2.0, 4.0]).unwrap();
    let f = CharacteristicField::new(vec![(b, Complex64::new(0.0, 2.0))]).unwrap();
    let n = weighted_norm(&f, &WeightSpec::new(0.0, 0.0, Flavor::S), 16).unwrap();
    assert!((n - 2.0 * b.volume().sqrt()).abs() < 1e-12);
}

#[test]
fn overlapping_boxes_are_rejected_by_norms() {
    let a = BoxSpec::new([0.0; 3], [1.0; 3]).unwrap();
    let b = BoxSpec::new([0.5, 0.0, 0.0], [1.0; 3]).unwrap();
    let one = Complex64::new(1.0, 0.0);
    let f = CharacteristicField::new(vec![(a, one), (b, one)]).unwrap();
    assert!(weighted_norm(&f, &WeightSpec::new(0.0, 0.0, Flavor::S), 16).is_err());
    assert!(BoxSpec::new([0.0; 3], [1.0, 0.0, 1.0]).is_err());
    assert!(CharacteristicField::new(vec![]).is_err());
}

#[test]
fn counterexample_preconditions() {
    assert!(counterexample_c1(dy(16), &ExponentCase::new(0.0, 0.0, -0.5)).is_err());
    assert!(counterexample_c1(dy(16), &ExponentCase::new(-1.5, 0.0, -0.5)).is_err());
    assert!(counterexample_c2(dy(8), &ExponentCase::new(-1.0, 0.0, -0.5)).is_err());
}

fn midpoints(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    let h = (hi - lo) / m as f64;
    (0..m).map(|i| lo + (i as f64 + 0.5) * h).collect()
}

/// Discrete convolution of two sampled interval indicators on a common step.
fn sampled_conv(a: (f64, f64), b: (f64, f64), h: f64) -> (f64, Vec<f64>) {
    let na = ((a.1 - a.0) / h).round() as usize;
    let nb = ((b.1 - b.0) / h).round() as usize;
    let mut out = vec![0.0; na + nb - 1];
    for i in 0..na {
        for j in 0..nb {
            out[i + j] += h;
        }
    }
    // Sample i+j sits at a.0 + b.0 + (i + j + 1) h.
    (a.0 + b.0 + h, out)
}

#[test]
fn first_counterexample_matches_dense_lattice_at_n16() {
    let n = 16.0f64;
    let case = ExponentCase::new(-1.0, 0.0, -0.5);
    let quad = counterexample_c1(dy(16), &case).unwrap();

    let wid = [1.0 / n, 1.0, 1.0];
    let vc = [2.0 * n + 1.0, 0.0, -2.0 * n - 1.0];
    let uc = [-n, 0.0, -n * n];
    let steps = [wid[0] / 40.0, wid[1] / 40.0, wid[2] / 40.0];
    let iv = |c: [f64; 3], d: usize| (c[d] - 0.5 * wid[d], c[d] + 0.5 * wid[d]);

    let axes: Vec<(f64, Vec<f64>)> = (0..3).map(|d| sampled_conv(iv(vc, d), iv(uc, d), steps[d])).collect();
    let mut num = 0.0;
    for (i, cx) in axes[0].1.iter().enumerate() {
        let x = axes[0].0 + i as f64 * steps[0];
        for (j, cy) in axes[1].1.iter().enumerate() {
            let y = axes[1].0 + j as f64 * steps[1];
            let r = x.hypot(y);
            for (l, ct) in axes[2].1.iter().enumerate() {
                let t = axes[2].0 + l as f64 * steps[2];
                let w = bracket(t + r * r).powf(-2.0 * case.b_out);
                num += w * (cx * cy * ct).powi(2);
            }
        }
    }
    num *= steps.iter().product::<f64>() / (2.0 * PI).powi(3);

    let box_norm = |c: [f64; 3], wfn: &dyn Fn(f64, f64, f64) -> f64| {
        let m = 40;
        let xs = midpoints(iv(c, 0).0, iv(c, 0).1, m);
        let ys = midpoints(iv(c, 1).0, iv(c, 1).1, m);
        let ts = midpoints(iv(c, 2).0, iv(c, 2).1, m);
        let mut acc = 0.0;
        for &x in &xs {
            for &y in &ys {
                for &t in &ts {
                    acc += wfn(x, y, t);
                }
            }
        }
        (acc * wid.iter().product::<f64>() / (m * m * m) as f64).sqrt()
    };
    let dv = box_norm(vc, &|x, y, t| {
        let r = x.hypot(y);
        bracket(r).powf(2.0 * case.ell) * bracket(t + r).powf(2.0 * case.b1)
    });
    let du = box_norm(uc, &|x, y, t| {
        let r = x.hypot(y);
        bracket(t + r * r).powf(2.0 * case.b2)
    });
    let lattice = num.sqrt() / (dv * du);
    assert!(((quad - lattice) / lattice).abs() < 0.02, "quadrature {quad} vs lattice {lattice}");
}

#[test]
fn first_counterexample_slopes() {
    let ns = scales(4, 8);
    let flat = counterexample_sweep(Counterexample::C1, &ExponentCase::new(-1.0, 0.0, -0.5), &ns).unwrap();
    assert!(flat.fitted_slope.unwrap().abs() <= 0.15, "{:?}", flat.fitted_slope);
    // The exponent for sigma = -1 does not involve the modulation exponents.
    let mut zero_b = ExponentCase::new(-1.0, 0.0, -0.5);
    zero_b.b_out = 0.0;
    zero_b.b1 = 0.1;
    zero_b.b2 = 0.9;
    let s = counterexample_sweep(Counterexample::C1, &zero_b, &ns).unwrap();
    assert!(s.fitted_slope.unwrap().abs() <= 0.15);
    let grow = counterexample_sweep(Counterexample::C1, &ExponentCase::new(-1.0, 0.0, -1.0), &ns).unwrap();
    assert!(grow.fitted_slope.unwrap() >= 0.35);
    let half = counterexample_sweep(Counterexample::C1, &ExponentCase::new(-0.5, 0.0, -0.5), &ns).unwrap();
    assert!(half.fitted_slope.unwrap().abs() <= 0.15, "{:?}", half.fitted_slope);
}

#[test]
fn second_counterexample_slopes() {
    let ns = scales(4, 8);
    for (k, ell, lo, hi) in [(0.0, -0.5, -0.15, 0.15), (0.0, 0.0, 0.35, f64::INFINITY), (0.25, 0.0, -0.15, 0.15)] {
        let r = counterexample_sweep(Counterexample::C2, &ExponentCase::new(-1.0, k, ell), &ns).unwrap();
        let s = r.fitted_slope.unwrap();
        assert!(s >= lo && s <= hi, "k={k} ell={ell}: slope {s}");
    }
}

#[test]
fn phase_integral_matches_quadrature() {
    for &(t, phi) in &[(0.5, 3.0), (1.0, -7.5), (0.2, 1e-10), (2.0, 0.0)] {
        let m = 20000;
        let h = t / m as f64;
        let direct: Complex64 = (0..m)
            .map(|i| Complex64::from_polar(h, (i as f64 + 0.5) * h * phi))
            .sum();
        assert!((phase_integral(t, phi) - direct).norm() < 1e-8, "t={t} phi={phi}");
    }
}

#[test]
fn duhamel_bounds_vanish_at_time_zero_and_check_window() {
    assert_eq!(duhamel_lower_bound_1(dy(32), 1.0, 0.0, -0.5, 0.0).unwrap().raw, 0.0);
    assert_eq!(duhamel_lower_bound_2(dy(32), 1.0, 0.0, -0.5, 0.0).unwrap().raw, 0.0);
    assert!(duhamel_lower_bound_1(dy(32), 1.0, 0.0, -0.5, 1.5).is_err());
    assert!(duhamel_lower_bound_1(dy(32), 1.0, 0.0, -0.5, -0.1).is_err());
    assert!(duhamel_lower_bound_2(dy(2), 1.0, 0.0, -0.5, 0.5).is_err());
}

/// `|F|_{L^2(R)}` for the first Duhamel term with every integral, including
/// the time integral, done by midpoint sums.
#[test]
fn first_duhamel_bound_matches_midpoint_oracle() {
    let n = 32.0f64;
    let t = 0.5;
    let e = 1.0 / n;
    let xs = midpoints(n + 1.0 - e, n + 1.0 + e, 6);
    let ys = midpoints(-1.0, 1.0, 8);
    let ps = midpoints(-n - e, -n + e, 16);
    let qs = midpoints(-1.0, 1.0, 16);
    let ts = midpoints(0.0, t, 48);
    let (hx, hy, hp, hq, ht) = (2.0 * e / 6.0, 2.0 / 8.0, 2.0 * e / 16.0, 2.0 / 16.0, t / 48.0);
    let in_b = |a: f64, b: f64| (a - (2.0 * n + 1.0)).abs() <= 2.0 * e && b.abs() <= 2.0;
    let mut num = 0.0;
    for &x in &xs {
        for &y in &ys {
            let mut f = Complex64::new(0.0, 0.0);
            for &p in &ps {
                for &q in &qs {
                    let (a, b) = (x - p, y - q);
                    if !(in_b(a, b) || in_b(-a, -b)) {
                        continue;
                    }
                    let w = (1.0 + a * a + b * b).sqrt();
                    let base = x * x + y * y - p * p - q * q;
                    for &s in &ts {
                        f += Complex64::from_polar(0.5 * ht, s * (base - w))
                            + Complex64::from_polar(0.5 * ht, s * (base + w));
                    }
                }
            }
            f *= hp * hq / (2.0 * PI);
            num += f.norm_sqr() * hx * hy;
        }
    }
    let du = 2.0 * e * 2.0;
    let dv = 2.0 * (4.0 * e * 4.0);
    let oracle = (num / (du * dv)).sqrt();
    let got = duhamel_lower_bound_1(dy(32), 1.0, 0.0, 0.0, t).unwrap().raw;
    assert!(((got - oracle) / oracle).abs() < 0.02, "{got} vs {oracle}");
}

#[test]
fn duhamel_slopes() {
    let ns = scales(5, 9);
    let fit = |f: &dyn Fn(DyadicScale) -> f64| {
        let pts: Vec<(f64, f64)> = ns.iter().map(|n| (n.value_f64(), f(*n))).collect();
        zlab_core::trilinear::fit_exponent(&pts).unwrap().slope
    };
    let s = fit(&|n| duhamel_lower_bound_1(n, 1.0, 0.0, -0.5, 0.5).unwrap().raw);
    assert!(s.abs() <= 0.15, "{s}");
    let s = fit(&|n| duhamel_lower_bound_1(n, 1.0, 0.0, -1.0, 0.5).unwrap().raw);
    assert!(s >= 0.35, "{s}");
    let s = fit(&|n| duhamel_lower_bound_2(n, 1.0, 0.0, -0.5, 0.5).unwrap().raw);
    assert!(s.abs() <= 0.15, "{s}");
    let s = fit(&|n| duhamel_lower_bound_2(n, 1.0, 0.0, 0.0, 0.5).unwrap().raw);
    assert!(s >= 0.35, "{s}");
    for n in &ns {
        assert!(duhamel_lower_bound_1(*n, 1.0, 0.0, -0.5, 0.5).unwrap().normalized > 0.01);
    }
}

#[test]
fn equal_points_map_to_nearby_intervals() {
    for j in [16i64, 100, 511] {
        assert_eq!(interval_image(j, 8.0, 0.0), j);
    }
    let r = localize_map(dy(64), dy(8), 0.0, 1e-3).unwrap();
    assert_eq!(r.containment_violations, 0);
    assert!(r.max_offset <= 3.0);
    assert!(r.pairs_checked > 1_000_000);
    assert!(r.passed());
}

#[test]
fn localize_map_with_offsets_and_hypotheses() {
    for k in [-512.0, 300.0, 1000.0] {
        let r = localize_map(dy(64), dy(8), k, 1e-3).unwrap();
        assert!(r.passed(), "k={k}: {} violations, multiplicity {}", r.containment_violations, r.max_multiplicity);
    }
    let r = localize_map(dy(256), dy(8), 0.0, 1e-2).unwrap();
    assert!(r.max_multiplicity <= 100);
    assert!(localize_map(dy(64), dy(32), 0.0, 1e-3).is_err());
    assert!(localize_map(dy(64), dy(8), 2000.0, 1e-3).is_err());
}

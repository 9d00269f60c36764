//! Characteristic functions of axis-aligned boxes in `(xi1, xi2, tau)` and the
//! sharpness counterexamples built from them.
//!
//! Box convolutions factor into products of one-dimensional trapezoids, so the
//! trilinear functional is exact and weighted norms reduce to tensor
//! Gauss-Legendre quadrature on cells where every factor is linear.

use super::band::interval_convolution;
use super::fit::fit_exponent;
use super::regimes::SweepResult;
use crate::dyadic::DyadicScale;
use crate::error::{invalid, Result, ZlabError};
use crate::projectors::Flavor;
use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::num::NonZeroUsize;
use std::str::FromStr;

pub const DEFAULT_QUADRATURE: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxSpec {
    pub center: [f64; 3],
    pub widths: [f64; 3],
}

impl BoxSpec {
    pub fn new(center: [f64; 3], widths: [f64; 3]) -> Result<Self> {
        if center.iter().any(|c| !c.is_finite()) {
            return Err(invalid("center", "must be finite"));
        }
        if widths.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(invalid("widths", format!("must be positive, got {widths:?}")));
        }
        Ok(BoxSpec { center, widths })
    }

    pub fn interval(&self, d: usize) -> (f64, f64) {
        let h = 0.5 * self.widths[d];
        (self.center[d] - h, self.center[d] + h)
    }

    pub fn volume(&self) -> f64 {
        self.widths.iter().product()
    }

    /// The box `-B`.
    pub fn reflected(&self) -> Self {
        BoxSpec {
            center: self.center.map(|c| -c),
            widths: self.widths,
        }
    }

    fn overlaps(&self, other: &BoxSpec) -> bool {
        (0..3).all(|d| {
            let (a0, a1) = self.interval(d);
            let (b0, b1) = other.interval(d);
            a1.min(b1) > a0.max(b0)
        })
    }
}

/// `sum_i c_i chi_{B_i}` on the space-time frequency side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicField {
    pub boxes: Vec<(BoxSpec, Complex64)>,
}

impl CharacteristicField {
    pub fn new(boxes: Vec<(BoxSpec, Complex64)>) -> Result<Self> {
        if boxes.is_empty() {
            return Err(ZlabError::Empty("characteristic field needs at least one box"));
        }
        Ok(CharacteristicField { boxes })
    }

    pub fn indicator(b: BoxSpec) -> Self {
        CharacteristicField {
            boxes: vec![(b, Complex64::new(1.0, 0.0))],
        }
    }

    /// Transform of the complex conjugate function: `conj(F(-zeta))`.
    pub fn conjugate_function(&self) -> Self {
        CharacteristicField {
            boxes: self.boxes.iter().map(|(b, c)| (b.reflected(), c.conj())).collect(),
        }
    }

    pub fn eval(&self, z: [f64; 3]) -> Complex64 {
        self.boxes
            .iter()
            .filter(|(b, _)| (0..3).all(|d| {
                let (lo, hi) = b.interval(d);
                z[d] >= lo && z[d] <= hi
            }))
            .map(|(_, c)| *c)
            .sum()
    }

    fn check_disjoint(&self) -> Result<()> {
        for (i, (a, _)) in self.boxes.iter().enumerate() {
            for (b, _) in &self.boxes[i + 1..] {
                if a.overlaps(b) {
                    return Err(invalid("boxes", "weighted norms need pairwise disjoint boxes"));
                }
            }
        }
        Ok(())
    }
}

/// Weight `<xi>^k <modulation>^b`, optionally times the symbol `|xi|^2 / <xi>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub k: f64,
    pub b: f64,
    pub flavor: Flavor,
    pub laplace_symbol: bool,
}

fn bracket(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

impl WeightSpec {
    pub fn new(k: f64, b: f64, flavor: Flavor) -> Self {
        WeightSpec {
            k,
            b,
            flavor,
            laplace_symbol: false,
        }
    }

    pub fn with_laplace_symbol(mut self) -> Self {
        self.laplace_symbol = true;
        self
    }

    pub fn eval(&self, z: [f64; 3]) -> f64 {
        let r = z[0].hypot(z[1]);
        let br = bracket(r);
        let mut w = br.powf(self.k) * bracket(self.flavor.modulation(r, z[2])).powf(self.b);
        if self.laplace_symbol {
            w *= r * r / br;
        }
        w
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub struct Quadrature {
    pairs: Vec<(f64, f64)>,
}

impl Quadrature {
    pub fn new(q: usize) -> Result<Self> {
        let deg = NonZeroUsize::new(q).ok_or_else(|| invalid("q", "must be positive"))?;
        Ok(Quadrature {
            pairs: GaussLegendre::new(deg).iter().map(|(x, w)| (*x, *w)).collect(),
        })
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
        self.pairs.iter().map(move |(x, w)| (m + h * x, h * w))
    }

    /// Tensor rule over the box `[lo, hi]`.
    pub fn integrate_box(&self, lo: [f64; 3], hi: [f64; 3], mut f: impl FnMut([f64; 3]) -> f64) -> f64 {
        let mut acc = 0.0;
        for (x, wx) in self.on(lo[0], hi[0]) {
            for (y, wy) in self.on(lo[1], hi[1]) {
                for (t, wt) in self.on(lo[2], hi[2]) {
                    acc += wx * wy * wt * f([x, y, t]);
                }
            }
        }
        acc
    }
}

/// `(chi_a * chi_b)(x)` for intervals: a trapezoid.
pub fn interval_overlap_convolution(a: (f64, f64), b: (f64, f64), x: f64) -> f64 {
    (a.1.min(x - b.0) - a.0.max(x - b.1)).max(0.0)
}

/// `I(f, g1, g2) = int f(z1 - z2) g1(z1) g2(z2)`, exact for box fields.
pub fn trilinear_i_boxes(f: &CharacteristicField, g1: &CharacteristicField, g2: &CharacteristicField) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (bf, cf) in &f.boxes {
        for (b1, c1) in &g1.boxes {
            for (b2, c2) in &g2.boxes {
                let mut v = 1.0;
                for d in 0..3 {
                    let (l1, h1) = b1.interval(d);
                    v *= interval_convolution(&[bf.interval(d), b2.interval(d), (-h1, -l1)], 0.0);
                    if v == 0.0 {
                        break;
                    }
                }
                acc += cf * c1 * c2 * v;
            }
        }
    }
    acc
}

/// `|F|_w = (int w^2 |F|^2)^{1/2}` for a field of disjoint boxes.
pub fn weighted_norm(f: &CharacteristicField, w: &WeightSpec, q: usize) -> Result<f64> {
    f.check_disjoint()?;
    let quad = Quadrature::new(q)?;
    let mut acc = 0.0;
    for (b, c) in &f.boxes {
        let lo = [0, 1, 2].map(|d| b.interval(d).0);
        let hi = [0, 1, 2].map(|d| b.interval(d).1);
        acc += c.norm_sqr() * quad.integrate_box(lo, hi, |z| w.eval(z).powi(2));
    }
    Ok(acc.sqrt())
}

/// Weighted norm of the transform of the product `(F^{-1} f)(F^{-1} g)`, which is
/// `(2 pi)^{-3/2} f * g`. Each pair of boxes contributes a product of trapezoids;
/// the quadrature runs over the cells between all trapezoid kinks.
pub fn product_weighted_norm(f: &CharacteristicField, g: &CharacteristicField, w: &WeightSpec, q: usize) -> Result<f64> {
    let quad = Quadrature::new(q)?;
    let pairs: Vec<([(f64, f64); 3], [(f64, f64); 3], Complex64)> = f
        .boxes
        .iter()
        .flat_map(|(a, ca)| {
            g.boxes.iter().map(move |(b, cb)| {
                ([0, 1, 2].map(|d| a.interval(d)), [0, 1, 2].map(|d| b.interval(d)), ca * cb)
            })
        })
        .collect();
    let mut cuts: [Vec<f64>; 3] = Default::default();
    for (a, b, _) in &pairs {
        for d in 0..3 {
            cuts[d].extend([a[d].0 + b[d].0, a[d].0 + b[d].1, a[d].1 + b[d].0, a[d].1 + b[d].1]);
        }
    }
    for c in cuts.iter_mut() {
        c.sort_by(f64::total_cmp);
        c.dedup();
    }
    let conv = |z: [f64; 3]| -> Complex64 {
        pairs
            .iter()
            .map(|(a, b, c)| {
                let v: f64 = (0..3).map(|d| interval_overlap_convolution(a[d], b[d], z[d])).product();
                c * v
            })
            .sum()
    };
    let active = |lo: [f64; 3], hi: [f64; 3]| {
        pairs.iter().any(|(a, b, _)| {
            (0..3).all(|d| lo[d] >= a[d].0 + b[d].0 && hi[d] <= a[d].1 + b[d].1)
        })
    };
    let mut acc = 0.0;
    for x in cuts[0].windows(2) {
        for y in cuts[1].windows(2) {
            for t in cuts[2].windows(2) {
                let lo = [x[0], y[0], t[0]];
                let hi = [x[1], y[1], t[1]];
                if !active(lo, hi) {
                    continue;
                }
                acc += quad.integrate_box(lo, hi, |z| w.eval(z).powi(2) * conv(z).norm_sqr());
            }
        }
    }
    Ok((acc / (2.0 * PI).powi(3)).sqrt())
}

/// Which sharpness construction to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Counterexample {
    /// Wave times Schrodinger into a Schrodinger norm.
    C1,
    /// `Delta / <grad>` of a Schrodinger square into a wave norm.
    C2,
}

impl Counterexample {
    pub const ALL: [Counterexample; 2] = [Counterexample::C1, Counterexample::C2];

    pub fn name(self) -> &'static str {
        match self {
            Counterexample::C1 => "c1",
            Counterexample::C2 => "c2",
        }
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Counterexample {
    type Err = ZlabError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "c1" | "C1" => Ok(Counterexample::C1),
            "c2" | "C2" => Ok(Counterexample::C2),
            _ => Err(invalid("lemma", format!("expected c1 or c2, got {s:?}"))),
        }
    }
}

/// Regularity and modulation exponents of one counterexample evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentCase {
    pub sigma: f64,
    pub k: f64,
    pub ell: f64,
    pub b_out: f64,
    pub b1: f64,
    pub b2: f64,
}

impl ExponentCase {
    /// Modulation exponents all equal to 5/12.
    pub fn new(sigma: f64, k: f64, ell: f64) -> Self {
        let b = 5.0 / 12.0;
        ExponentCase {
            sigma,
            k,
            ell,
            b_out: b,
            b1: b,
            b2: b,
        }
    }

    /// Growth exponent of the ratio in `N`.
    pub fn predicted(&self, which: Counterexample) -> f64 {
        let tail = (1.0 + self.sigma) * (1.25 - (self.b_out + self.b1 + self.b2));
        match which {
            Counterexample::C1 => -self.ell - 0.5 + tail,
            Counterexample::C2 => self.ell - 2.0 * self.k + 0.5 + tail,
        }
    }

    fn validate(&self, n: DyadicScale) -> Result<()> {
        if !(self.sigma >= -1.0 && self.sigma < 0.0) {
            return Err(invalid("sigma", format!("must lie in [-1, 0), got {}", self.sigma)));
        }
        if n.value() < 16 {
            return Err(invalid("N", format!("must be at least 16, got {n}")));
        }
        let all = [self.k, self.ell, self.b_out, self.b1, self.b2];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(invalid("exponents", "must be finite"));
        }
        Ok(())
    }
}

fn sharp_box(center: [f64; 3], n: f64, sigma: f64) -> BoxSpec {
    BoxSpec {
        center,
        widths: [n.powf(sigma), n.powf(0.5 * (1.0 + sigma)), n.powf(1.0 + sigma)],
    }
}

/// `|v u|_{X^S_{k,-b'}} / (|v|_{X^{W+}_{l,b1}} |u|_{X^S_{k,b2}})` for `v`, `u`
/// indicators of boxes around `(2N+1, 0, -2N-1)` and `(-N, 0, -N^2)`.
pub fn counterexample_c1(n: DyadicScale, case: &ExponentCase) -> Result<f64> {
    case.validate(n)?;
    let nf = n.value_f64();
    let v = CharacteristicField::indicator(sharp_box([2.0 * nf + 1.0, 0.0, -2.0 * nf - 1.0], nf, case.sigma));
    let u = CharacteristicField::indicator(sharp_box([-nf, 0.0, -nf * nf], nf, case.sigma));
    let q = DEFAULT_QUADRATURE;
    let num = product_weighted_norm(&v, &u, &WeightSpec::new(case.k, -case.b_out, Flavor::S), q)?;
    let dv = weighted_norm(&v, &WeightSpec::new(case.ell, case.b1, Flavor::WPlus), q)?;
    let du = weighted_norm(&u, &WeightSpec::new(case.k, case.b2, Flavor::S), q)?;
    Ok(num / (dv * du))
}

/// `|Delta/<grad> (u conj w)|_{X^{W+}_{l,-b'}} / (|u|_{X^S_{k,b1}} |w|_{X^S_{k,b2}})`
/// for `u`, `w` indicators of boxes around `(N+1, 0, -(N+1)^2)` and `(-N, 0, -N^2)`.
pub fn counterexample_c2(n: DyadicScale, case: &ExponentCase) -> Result<f64> {
    case.validate(n)?;
    let nf = n.value_f64();
    let u = CharacteristicField::indicator(sharp_box([nf + 1.0, 0.0, -(nf + 1.0).powi(2)], nf, case.sigma));
    let w = CharacteristicField::indicator(sharp_box([-nf, 0.0, -nf * nf], nf, case.sigma));
    let q = DEFAULT_QUADRATURE;
    let out = WeightSpec::new(case.ell, -case.b_out, Flavor::WPlus).with_laplace_symbol();
    let num = product_weighted_norm(&u, &w.conjugate_function(), &out, q)?;
    let du = weighted_norm(&u, &WeightSpec::new(case.k, case.b1, Flavor::S), q)?;
    let dw = weighted_norm(&w, &WeightSpec::new(case.k, case.b2, Flavor::S), q)?;
    Ok(num / (du * dw))
}

pub fn counterexample(which: Counterexample, n: DyadicScale, case: &ExponentCase) -> Result<f64> {
    match which {
        Counterexample::C1 => counterexample_c1(n, case),
        Counterexample::C2 => counterexample_c2(n, case),
    }
}

/// Ratios over the given scales with a log-log slope fit.
pub fn counterexample_sweep(which: Counterexample, case: &ExponentCase, scales: &[DyadicScale]) -> Result<SweepResult> {
    let mut measured = Vec::with_capacity(scales.len());
    for &n in scales {
        measured.push((n.value_f64(), counterexample(which, n, case)?));
    }
    let fit = fit_exponent(&measured)?;
    let params = vec![
        ("sigma".to_string(), case.sigma),
        ("k".to_string(), case.k),
        ("ell".to_string(), case.ell),
        ("b_out".to_string(), case.b_out),
        ("b1".to_string(), case.b1),
        ("b2".to_string(), case.b2),
        ("predicted".to_string(), case.predicted(which)),
    ];
    let mut r = SweepResult::from_ratios(which.name().to_string(), params, measured);
    r.fitted_slope = Some(fit.slope);
    r.fit_residual = Some(fit.residual);
    Ok(r)
}

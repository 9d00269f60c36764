//! The full trilinear estimate on space-time lattices with multiband fields.

use super::lattice::trilinear_i;
use super::regimes::SweepResult;
use crate::cutoff::psi_n;
use crate::dyadic::DyadicScale;
use crate::error::Result;
use crate::grid::{FrequencyGrid, SpaceTimeField, SpaceTimeGrid};
use crate::norms::{bourgain_norm, NormSpec, SumExponent};
use crate::projectors::Flavor;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Shape of a space-time lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub n: usize,
    pub n_t: usize,
    pub half_period: f64,
    pub time_window: f64,
}

impl LatticeSpec {
    /// 32 x 32 x 32 with spacings 1/2 in frequency and 2 in tau.
    pub fn desk() -> Self {
        LatticeSpec {
            n: 32,
            n_t: 32,
            half_period: 2.0,
            time_window: PI,
        }
    }

    /// Same frequency box with half the spacing in every direction.
    pub fn refined(&self) -> Self {
        LatticeSpec {
            n: 2 * self.n,
            n_t: 2 * self.n_t,
            half_period: 2.0 * self.half_period,
            time_window: 2.0 * self.time_window,
        }
    }

    pub fn grid(&self) -> Result<SpaceTimeGrid> {
        SpaceTimeGrid::new(
            FrequencyGrid::new(self.half_period, self.n)?,
            self.time_window,
            self.n_t,
        )
    }
}

/// Positive smooth texture in `(xi1, xi2, tau)`.
struct Texture3 {
    modes: Vec<[f64; 4]>,
}

impl Texture3 {
    fn random<R: Rng>(rng: &mut R) -> Self {
        let modes = (0..8)
            .map(|_| {
                let ang = rng.random_range(0.0..2.0 * PI);
                let k = rng.random_range(0.5..1.5);
                let kt = rng.random_range(-0.25..0.25);
                [k * ang.cos(), k * ang.sin(), kt, rng.random_range(0.0..2.0 * PI)]
            })
            .collect();
        Texture3 { modes }
    }

    fn eval(&self, x: f64, y: f64, t: f64) -> f64 {
        let s: f64 = self
            .modes
            .iter()
            .map(|m| (m[0] * x + m[1] * y + m[2] * t + m[3]).cos())
            .sum();
        (0.7 * s / (self.modes.len() as f64).sqrt()).exp()
    }
}

/// Sum over the given frequency and modulation bands, each with a random weight
/// in [0.5, 1.5], times a smooth random texture. Nyquist planes are zero.
pub fn multiband_field(
    grid: SpaceTimeGrid,
    flavor: Flavor,
    bands: &[DyadicScale],
    modulations: &[DyadicScale],
    seed: u64,
) -> SpaceTimeField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cn: Vec<f64> = bands.iter().map(|_| rng.random_range(0.5..1.5)).collect();
    let cl: Vec<f64> = modulations.iter().map(|_| rng.random_range(0.5..1.5)).collect();
    let tex = Texture3::random(&mut rng);
    let mut w = SpaceTimeField::zeros(grid);
    for (idx, v) in w.values.iter_mut().enumerate() {
        if grid.on_nyquist(idx) {
            continue;
        }
        let (a, b, t) = grid.zeta(idx);
        let r = a.hypot(b);
        let fw: f64 = bands.iter().zip(&cn).map(|(n, c)| c * psi_n(*n, r)).sum();
        if fw == 0.0 {
            continue;
        }
        let md = flavor.modulation(r, t);
        let mw: f64 = modulations.iter().zip(&cl).map(|(l, c)| c * psi_n(*l, md)).sum();
        if mw == 0.0 {
            continue;
        }
        *v = Complex64::new(fw * mw * tex.eval(a, b, t), 0.0);
    }
    w
}

fn scales(v: &[u64]) -> Vec<DyadicScale> {
    v.iter().map(|x| DyadicScale::from_value(*x).unwrap()).collect()
}

/// The three fields `(v, u1, u2)` of one sample. With `conjugate` the wave
/// field is replaced by its conjugate function, which lives on the W- surface.
pub fn trilinear_sample(grid: SpaceTimeGrid, seed: u64, conjugate: bool) -> (SpaceTimeField, Flavor, SpaceTimeField, SpaceTimeField) {
    let sb = scales(&[1, 2]);
    let wb = scales(&[1, 2, 4]);
    let mb = scales(&[1, 2, 4, 8]);
    let base = seed.wrapping_mul(3);
    let u1 = multiband_field(grid, Flavor::S, &sb, &mb, base);
    let u2 = multiband_field(grid, Flavor::S, &sb, &mb, base.wrapping_add(1));
    let v = multiband_field(grid, Flavor::WPlus, &wb, &mb, base.wrapping_add(2));
    if conjugate {
        (v.conjugate(), Flavor::WMinus, u1, u2)
    } else {
        (v, Flavor::WPlus, u1, u2)
    }
}

/// `|I(v, u1, u2)| / (|u1| |u2| |v|)` with Schrodinger norms `X_{0, 5/12, 1}` and
/// the wave norm `X_{-1/2, 5/12, 1}`.
pub fn trilinear_ratio(v: &SpaceTimeField, flavor: Flavor, u1: &SpaceTimeField, u2: &SpaceTimeField) -> Result<f64> {
    let i = trilinear_i(v, u1, u2)?.norm();
    if i == 0.0 {
        return Ok(0.0);
    }
    let ns = NormSpec::new(Flavor::S, 0.0, 5.0 / 12.0, SumExponent::One);
    let nw = NormSpec::new(flavor, -0.5, 5.0 / 12.0, SumExponent::One);
    Ok(i / (bourgain_norm(u1, &ns) * bourgain_norm(u2, &ns) * bourgain_norm(v, &nw)))
}

pub fn check_trilinear_full(seeds: &[u64], spec: LatticeSpec, conjugate: bool) -> Result<SweepResult> {
    let grid = spec.grid()?;
    let mut measured = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let (v, fl, u1, u2) = trilinear_sample(grid, seed, conjugate);
        measured.push((seed as f64, trilinear_ratio(&v, fl, &u1, &u2)?));
    }
    let params = vec![
        ("n".to_string(), spec.n as f64),
        ("n_t".to_string(), spec.n_t as f64),
        ("half_period".to_string(), spec.half_period),
        ("time_window".to_string(), spec.time_window),
        ("conjugate".to_string(), if conjugate { 1.0 } else { 0.0 }),
    ];
    let label = if conjugate { "trilinear-conjugate" } else { "trilinear" };
    Ok(SweepResult::from_ratios(label.to_string(), params, measured))
}

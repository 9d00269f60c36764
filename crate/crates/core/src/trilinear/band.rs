//! Continuum band fields for the estimate sweeps.
//!
//! A band field has Fourier transform `a(xi) * b(tau + h(xi))` where `h` fixes the
//! characteristic surface, `a` is a smooth nonnegative amplitude (random texture
//! times frequency and angular cutoffs) and `b` is piecewise constant on the
//! modulation block. The modulation integrals are evaluated in closed form through
//! convolutions of interval indicators; only the frequency variables are summed on
//! a lattice of spacing `dxi`, so refinement changes nothing but quadrature error.

use crate::cutoff::{psi, psi_n, psi_n_support};
use crate::dyadic::DyadicScale;
use crate::error::{invalid, Result, ZlabError};
use crate::projectors::{AngularSector, Flavor};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Characteristic surface `tau = -h(xi)`; the modulation variable is `tau + h(xi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Surface {
    Schrodinger,
    SchrodingerConj,
    WavePlus,
    WaveMinus,
}

impl Surface {
    #[inline]
    pub fn h(self, x: f64, y: f64) -> f64 {
        let r2 = x * x + y * y;
        match self {
            Surface::Schrodinger => r2,
            Surface::SchrodingerConj => -r2,
            Surface::WavePlus => r2.sqrt(),
            Surface::WaveMinus => -r2.sqrt(),
        }
    }

    pub fn from_flavor(f: Flavor) -> Result<Surface> {
        match f {
            Flavor::S => Ok(Surface::Schrodinger),
            Flavor::WPlus => Ok(Surface::WavePlus),
            Flavor::WMinus => Ok(Surface::WaveMinus),
            Flavor::WFull => Err(invalid(
                "flavor",
                "band fields need a single characteristic surface, not Wfull",
            )),
        }
    }

    fn paraboloid_sign(self) -> Option<f64> {
        match self {
            Surface::Schrodinger => Some(1.0),
            Surface::SchrodingerConj => Some(-1.0),
            _ => None,
        }
    }
}

/// Smooth positive random texture `exp(amp * mean of cosines)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Texture {
    modes: Vec<[f64; 3]>,
    amplitude: f64,
}

impl Texture {
    pub fn flat() -> Self {
        Texture {
            modes: Vec::new(),
            amplitude: 0.0,
        }
    }

    /// Eight plane-wave modes with wavelength of order `scale` in frequency space.
    pub fn random<R: Rng>(rng: &mut R, scale: f64) -> Self {
        let modes = (0..8)
            .map(|_| {
                let ang = rng.random_range(0.0..2.0 * PI);
                let k = rng.random_range(0.5..1.5) / scale;
                let phase = rng.random_range(0.0..2.0 * PI);
                [k * ang.cos(), k * ang.sin(), phase]
            })
            .collect();
        Texture {
            modes,
            amplitude: 0.7,
        }
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        if self.modes.is_empty() {
            return 1.0;
        }
        let s: f64 = self
            .modes
            .iter()
            .map(|m| (m[0] * x + m[1] * y + m[2]).cos())
            .sum();
        (self.amplitude * s / (self.modes.len() as f64).sqrt()).exp()
    }
}

/// Spatial frequency support of a band field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Footprint {
    /// Dyadic annulus `P_N`.
    Annulus(DyadicScale),
    /// Dyadic annulus cut by an angular sector.
    Sector(DyadicScale, AngularSector),
    /// Smooth bump filling an axis-parallel square of side `side`.
    Cube { center: (f64, f64), side: f64 },
}

impl Footprint {
    #[inline]
    pub fn weight(&self, x: f64, y: f64) -> f64 {
        match *self {
            Footprint::Annulus(n) => psi_n(n, x.hypot(y)),
            Footprint::Sector(n, s) => {
                let r = psi_n(n, x.hypot(y));
                if r == 0.0 {
                    0.0
                } else {
                    r * s.weight(x, y)
                }
            }
            Footprint::Cube { center, side } => {
                psi(4.0 * (x - center.0) / side) * psi(4.0 * (y - center.1) / side)
            }
        }
    }

    /// Axis box `(xmin, xmax, ymin, ymax)` containing the support.
    fn bounds(&self) -> (f64, f64, f64, f64) {
        match *self {
            Footprint::Annulus(n) | Footprint::Sector(n, _) => {
                let r = psi_n_support(n).1;
                (-r, r, -r, r)
            }
            Footprint::Cube { center, side } => (
                center.0 - side / 2.0,
                center.0 + side / 2.0,
                center.1 - side / 2.0,
                center.1 + side / 2.0,
            ),
        }
    }
}

/// Modulation profile pieces `(lo, hi, weight)` on the block of `L`.
pub fn modulation_pieces(l: DyadicScale, weights: (f64, f64)) -> Vec<(f64, f64, f64)> {
    let lv = l.value_f64();
    if l.exponent() == 0 {
        vec![(-2.0, 2.0, weights.0)]
    } else {
        vec![
            (lv / 2.0, 2.0 * lv, weights.0),
            (-2.0 * lv, -lv / 2.0, weights.1),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandField {
    pub footprint: Footprint,
    pub surface: Surface,
    pub modulation: DyadicScale,
    pub pieces: Vec<(f64, f64, f64)>,
    pub texture: Texture,
}

impl BandField {
    pub fn new(footprint: Footprint, surface: Surface, modulation: DyadicScale) -> Self {
        BandField {
            footprint,
            surface,
            modulation,
            pieces: modulation_pieces(modulation, (1.0, 1.0)),
            texture: Texture::flat(),
        }
    }

    /// Random texture and random side weights of the modulation profile.
    pub fn random<R: Rng>(
        rng: &mut R,
        footprint: Footprint,
        surface: Surface,
        modulation: DyadicScale,
        texture_scale: f64,
    ) -> Self {
        let texture = Texture::random(rng, texture_scale);
        let w = (rng.random_range(0.5..1.5), rng.random_range(0.5..1.5));
        BandField {
            footprint,
            surface,
            modulation,
            pieces: modulation_pieces(modulation, w),
            texture,
        }
    }

    #[inline]
    pub fn amplitude(&self, x: f64, y: f64) -> f64 {
        let w = self.footprint.weight(x, y);
        if w == 0.0 {
            0.0
        } else {
            w * self.texture.eval(x, y)
        }
    }

    /// Samples the amplitude on the lattice `dxi * Z^2` and normalises to unit L2.
    pub fn sample(&self, dxi: f64) -> Result<SampledBand> {
        if !(dxi > 0.0 && dxi.is_finite()) {
            return Err(invalid("dxi", format!("must be positive, got {dxi}")));
        }
        let (x0, x1, y0, y1) = self.footprint.bounds();
        let i0 = (x0 / dxi).floor() as i64;
        let i1 = (x1 / dxi).ceil() as i64;
        let j0 = (y0 / dxi).floor() as i64;
        let j1 = (y1 / dxi).ceil() as i64;
        let nx = (i1 - i0 + 1) as usize;
        let ny = (j1 - j0 + 1) as usize;
        let mut amp = vec![0.0; nx * ny];
        for a in 0..nx {
            let x = (i0 + a as i64) as f64 * dxi;
            for b in 0..ny {
                let y = (j0 + b as i64) as f64 * dxi;
                amp[a * ny + b] = self.amplitude(x, y);
            }
        }
        let band = SampledBand::from_grid(dxi, i0, j0, nx, ny, amp, self.surface, self.pieces.clone())?;
        Ok(band.normalized())
    }
}

/// Lattice samples of a band amplitude with row and column extents of the support.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledBand {
    pub dxi: f64,
    i0: i64,
    j0: i64,
    nx: usize,
    ny: usize,
    amp: Vec<f64>,
    rows: Vec<(i64, i64)>,
    cols: Vec<(i64, i64)>,
    pub surface: Surface,
    pub pieces: Vec<(f64, f64, f64)>,
}

const EMPTY: (i64, i64) = (1, 0);

fn extent(lines: &[(i64, i64)], origin: i64) -> (i64, i64) {
    let first = lines.iter().position(|r| r.0 <= r.1);
    let last = lines.iter().rposition(|r| r.0 <= r.1);
    match (first, last) {
        (Some(a), Some(b)) => (origin + a as i64, origin + b as i64),
        _ => EMPTY,
    }
}

/// Integer `t` range with `c * t + v` inside `[lo, hi]` for some `v` in `[vlo, vhi]`.
fn strip_range(c: i64, lo: f64, hi: f64, vlo: f64, vhi: f64) -> (i64, i64) {
    let a = (lo - vhi) / c as f64;
    let b = (hi - vlo) / c as f64;
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    (a.floor() as i64, b.ceil() as i64)
}

impl SampledBand {
    fn from_grid(
        dxi: f64,
        i0: i64,
        j0: i64,
        nx: usize,
        ny: usize,
        amp: Vec<f64>,
        surface: Surface,
        pieces: Vec<(f64, f64, f64)>,
    ) -> Result<Self> {
        let mut rows = vec![EMPTY; nx];
        let mut cols = vec![EMPTY; ny];
        let mut any = false;
        for a in 0..nx {
            for b in 0..ny {
                if amp[a * ny + b] != 0.0 {
                    any = true;
                    let (i, j) = (i0 + a as i64, j0 + b as i64);
                    let r = &mut rows[a];
                    *r = if r.0 > r.1 { (j, j) } else { (r.0.min(j), r.1.max(j)) };
                    let c = &mut cols[b];
                    *c = if c.0 > c.1 { (i, i) } else { (c.0.min(i), c.1.max(i)) };
                }
            }
        }
        if !any {
            return Err(ZlabError::EmptyBand(format!(
                "no lattice point of spacing {dxi} inside the footprint"
            )));
        }
        Ok(SampledBand {
            dxi,
            i0,
            j0,
            nx,
            ny,
            amp,
            rows,
            cols,
            surface,
            pieces,
        })
    }

    #[inline]
    pub fn at(&self, i: i64, j: i64) -> f64 {
        let a = i - self.i0;
        let b = j - self.j0;
        if a < 0 || b < 0 || a >= self.nx as i64 || b >= self.ny as i64 {
            0.0
        } else {
            self.amp[a as usize * self.ny + b as usize]
        }
    }

    #[inline]
    fn row(&self, i: i64) -> (i64, i64) {
        let a = i - self.i0;
        if a < 0 || a >= self.nx as i64 {
            EMPTY
        } else {
            self.rows[a as usize]
        }
    }

    #[inline]
    fn col(&self, j: i64) -> (i64, i64) {
        let b = j - self.j0;
        if b < 0 || b >= self.ny as i64 {
            EMPTY
        } else {
            self.cols[b as usize]
        }
    }

    /// Smallest and largest first lattice index of the support.
    fn i_range(&self) -> (i64, i64) {
        extent(&self.rows, self.i0)
    }

    /// Smallest and largest second lattice index of the support.
    fn j_range(&self) -> (i64, i64) {
        extent(&self.cols, self.j0)
    }

    /// Number of lattice points with nonzero amplitude.
    pub fn support_size(&self) -> usize {
        self.amp.iter().filter(|a| **a != 0.0).count()
    }

    /// `int |b|^2 ds` of the modulation profile.
    pub fn profile_energy(&self) -> f64 {
        self.pieces.iter().map(|(lo, hi, w)| w * w * (hi - lo)).sum()
    }

    /// L2 norm of the field over (xi, tau).
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.amp.iter().map(|a| a * a).sum();
        (s * self.dxi * self.dxi * self.profile_energy()).sqrt()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.l2_norm();
        if n > 0.0 {
            for a in &mut self.amp {
                *a /= n;
            }
        }
        self
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        for a in &mut out.amp {
            *a *= c;
        }
        out
    }
}

/// `(1_{I_1} * ... * 1_{I_n})(x)` for closed intervals `I_k = [lo_k, hi_k]`.
pub fn interval_convolution(intervals: &[(f64, f64)], x: f64) -> f64 {
    let n = intervals.len();
    assert!(n >= 1 && n <= 16);
    if n == 1 {
        let (lo, hi) = intervals[0];
        return if x >= lo && x <= hi { 1.0 } else { 0.0 };
    }
    let deg = (n - 1) as i32;
    let fact: f64 = (1..n).map(|k| k as f64).product();
    let mut acc = 0.0;
    for mask in 0u32..(1 << n) {
        let mut shift = 0.0;
        for (k, (lo, hi)) in intervals.iter().enumerate() {
            shift += if mask & (1 << k) != 0 { *hi } else { *lo };
        }
        let t = x - shift;
        if t > 0.0 {
            let term = t.powi(deg);
            if mask.count_ones() % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
    }
    (acc / fact).max(0.0)
}

/// Weighted sum of interval convolutions over all piece combinations; the
/// `reflect` flags mirror the corresponding profile (`b(s) -> b(-s)`).
fn piece_convolution(profiles: &[(&[(f64, f64, f64)], bool)], x: f64) -> f64 {
    let mut idx = vec![0usize; profiles.len()];
    let mut acc = 0.0;
    let mut ints = vec![(0.0, 0.0); profiles.len()];
    loop {
        let mut w = 1.0;
        for (k, (p, refl)) in profiles.iter().enumerate() {
            let (lo, hi, wk) = p[idx[k]];
            w *= wk;
            ints[k] = if *refl { (-hi, -lo) } else { (lo, hi) };
        }
        acc += w * interval_convolution(&ints, x);
        let mut k = 0;
        loop {
            if k == profiles.len() {
                return acc;
            }
            idx[k] += 1;
            if idx[k] < profiles[k].0.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn support_of(profiles: &[(&[(f64, f64, f64)], bool)]) -> (f64, f64) {
    let mut lo = 0.0;
    let mut hi = 0.0;
    for (p, refl) in profiles {
        let plo = p.iter().map(|q| q.0).fold(f64::INFINITY, f64::min);
        let phi = p.iter().map(|q| q.1).fold(f64::NEG_INFINITY, f64::max);
        if *refl {
            lo -= phi;
            hi -= plo;
        } else {
            lo += plo;
            hi += phi;
        }
    }
    (lo, hi)
}

/// Dense table of a compactly supported kernel with linear interpolation.
#[derive(Debug, Clone)]
pub struct KernelTable {
    lo: f64,
    hi: f64,
    step: f64,
    values: Vec<f64>,
}

impl KernelTable {
    pub fn build(lo: f64, hi: f64, samples: usize, f: impl Fn(f64) -> f64) -> Self {
        let step = (hi - lo) / (samples - 1) as f64;
        let values = (0..samples).map(|k| f(lo + k as f64 * step)).collect();
        KernelTable {
            lo,
            hi,
            step,
            values,
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.lo || x >= self.hi {
            return 0.0;
        }
        let s = (x - self.lo) / self.step;
        let k = s as usize;
        if k + 1 >= self.values.len() {
            return self.values[self.values.len() - 1];
        }
        let f = s - k as f64;
        self.values[k] * (1.0 - f) + self.values[k + 1] * f
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }
}

const TABLE_SAMPLES: usize = 1 << 14;

/// Modulation kernel of the trilinear form: the area of
/// `{(s1, s2) : b1(s1) b2(s2) b0(s1 - s2 - omega)}` weighted by the profiles.
pub fn resonance_kernel(
    p0: &[(f64, f64, f64)],
    p1: &[(f64, f64, f64)],
    p2: &[(f64, f64, f64)],
    omega: f64,
) -> f64 {
    piece_convolution(&[(p1, false), (p2, true), (p0, true)], omega)
}

fn resonance_table(p0: &[(f64, f64, f64)], p1: &[(f64, f64, f64)], p2: &[(f64, f64, f64)]) -> KernelTable {
    let prof = [(p1, false), (p2, true), (p0, true)];
    let (lo, hi) = support_of(&prof);
    KernelTable::build(lo, hi, TABLE_SAMPLES, |x| piece_convolution(&prof, x))
}

/// `I(f, g1, g2)` for band fields: wave-type `f` at `xi1 - xi2`, `g1` at `xi1`,
/// `g2` at `xi2`. All three must share the lattice spacing.
pub fn band_trilinear(f: &SampledBand, g1: &SampledBand, g2: &SampledBand) -> Result<f64> {
    let dxi = f.dxi;
    if g1.dxi != dxi || g2.dxi != dxi {
        return Err(ZlabError::GridMismatch(
            "band fields sampled with different spacings".into(),
        ));
    }
    let table = resonance_table(&f.pieces, &g1.pieces, &g2.pieces);
    let (olo, ohi) = table.support();
    let sign = match (g1.surface.paraboloid_sign(), g2.surface.paraboloid_sign()) {
        (Some(a), Some(b)) if a == b => Some(a),
        _ => None,
    };
    let (s1, s2, s0) = (g1.surface, g2.surface, f.surface);
    let d2 = dxi * dxi;

    // eta = xi1 - xi2 ranges over box(g1) - box(g2).
    let (gi0, gi1) = g1.i_range();
    let (hi0, hi1) = g2.i_range();
    let (gj0, gj1) = g1.j_range();
    let (hj0, hj1) = g2.j_range();
    let (fi0, fi1) = f.i_range();
    let p_lo = fi0.max(gi0 - hi1);
    let p_hi = fi1.min(gi1 - hi0);
    let q_lo = f.j_range().0.max(gj0 - hj1);
    let q_hi = f.j_range().1.min(gj1 - hj0);

    let mut total = 0.0;
    for p in p_lo..=p_hi {
        let (fr0, fr1) = f.row(p);
        for q in fr0.max(q_lo)..=fr1.min(q_hi) {
            let a0 = f.at(p, q);
            if a0 == 0.0 {
                continue;
            }
            let ex = p as f64 * dxi;
            let ey = q as f64 * dxi;
            let h0 = s0.h(ex, ey);
            // Strip of xi1 . eta values (in lattice units) where the kernel can be nonzero.
            let strip = match sign {
                Some(sg) if p != 0 || q != 0 => {
                    let e2 = ex * ex + ey * ey;
                    let a = (olo + h0) * sg + e2;
                    let b = (ohi + h0) * sg + e2;
                    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                    Some((lo / (2.0 * d2), hi / (2.0 * d2)))
                }
                _ => None,
            };
            let mut inner = 0.0;
            let mut visit = |i: i64, j: i64| {
                let a1 = g1.at(i, j);
                if a1 == 0.0 {
                    return;
                }
                let a2 = g2.at(i - p, j - q);
                if a2 == 0.0 {
                    return;
                }
                let x1 = i as f64 * dxi;
                let y1 = j as f64 * dxi;
                let om = s1.h(x1, y1) - s2.h(x1 - ex, y1 - ey) - h0;
                let k = table.eval(om);
                if k != 0.0 {
                    inner += a1 * a2 * k;
                }
            };
            let by_rows = match strip {
                Some(_) => q.abs() >= p.abs(),
                None => true,
            };
            if by_rows {
                let mut lo = gi0.max(hi0 + p);
                let mut hi = gi1.min(hi1 + p);
                if let (Some((mlo, mhi)), true) = (strip, p != 0) {
                    let (v0, v1) = ((gj0 * q).min(gj1 * q) as f64, (gj0 * q).max(gj1 * q) as f64);
                    let (a, b) = strip_range(p, mlo, mhi, v0, v1);
                    lo = lo.max(a);
                    hi = hi.min(b);
                }
                for i in lo..=hi {
                    let (r0, r1) = g1.row(i);
                    let (t0, t1) = g2.row(i - p);
                    let mut jlo = r0.max(t0 + q);
                    let mut jhi = r1.min(t1 + q);
                    if let Some((mlo, mhi)) = strip {
                        let base = (i * p) as f64;
                        let (u, v) = ((mlo - base) / q as f64, (mhi - base) / q as f64);
                        let (u, v) = if u <= v { (u, v) } else { (v, u) };
                        jlo = jlo.max(u.floor() as i64);
                        jhi = jhi.min(v.ceil() as i64);
                    }
                    for j in jlo..=jhi {
                        visit(i, j);
                    }
                }
            } else {
                let (mlo, mhi) = strip.unwrap();
                let mut lo = gj0.max(hj0 + q);
                let mut hi = gj1.min(hj1 + q);
                if q != 0 {
                    let (v0, v1) = ((gi0 * p).min(gi1 * p) as f64, (gi0 * p).max(gi1 * p) as f64);
                    let (a, b) = strip_range(q, mlo, mhi, v0, v1);
                    lo = lo.max(a);
                    hi = hi.min(b);
                }
                for j in lo..=hi {
                    let (c0, c1) = g1.col(j);
                    let (t0, t1) = g2.col(j - q);
                    let base = (j * q) as f64;
                    let (u, v) = ((mlo - base) / p as f64, (mhi - base) / p as f64);
                    let (u, v) = if u <= v { (u, v) } else { (v, u) };
                    let ilo = c0.max(t0 + p).max(u.floor() as i64);
                    let ihi = c1.min(t1 + p).min(v.ceil() as i64);
                    for i in ilo..=ihi {
                        visit(i, j);
                    }
                }
            }
            total += a0 * inner;
        }
    }
    Ok(total * d2 * d2)
}

/// `int G^2` for `G(t) = sum c B(phi - t)` by direct pairs against the
/// autocorrelation table of `B`.
fn pair_energy(pts: &mut [(f64, f64)], ctable: &KernelTable) -> f64 {
    let chi = ctable.support().1;
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let c0 = ctable.eval(0.0);
    let m = pts.len();
    let mut e = 0.0;
    for a in 0..m {
        e += pts[a].1 * pts[a].1 * c0;
        for b in (a + 1)..m {
            let d = pts[b].0 - pts[a].0;
            if d >= chi {
                break;
            }
            e += 2.0 * pts[a].1 * pts[b].1 * ctable.eval(d);
        }
    }
    e
}

/// Same integral with the phases binned linearly onto a grid of spacing `delta`
/// and `B` sampled at the taps `tap_lo * delta, (tap_lo + 1) * delta, ...`.
#[allow(clippy::too_many_arguments)]
fn binned_energy(
    pts: &[(f64, f64)],
    pmin: f64,
    nbins: usize,
    delta: f64,
    tap_lo: i64,
    taps: &[f64],
    hist: &mut Vec<f64>,
    gsamp: &mut Vec<f64>,
) -> f64 {
    hist.clear();
    hist.resize(nbins, 0.0);
    for (phi, c) in pts {
        let s = (phi - pmin) / delta;
        let k = s.floor() as usize;
        let fr = s - k as f64;
        hist[k] += c * (1.0 - fr);
        hist[k + 1] += c * fr;
    }
    // G(t_k) = sum_j H_j B((j - k) delta), t_k = pmin + k delta.
    let tap_hi = tap_lo + taps.len() as i64 - 1;
    let k_lo = -tap_hi;
    let k_hi = nbins as i64 - 1 - tap_lo;
    gsamp.clear();
    gsamp.resize((k_hi - k_lo + 1) as usize, 0.0);
    for (jb, h) in hist.iter().enumerate() {
        if *h == 0.0 {
            continue;
        }
        for (t, bv) in taps.iter().enumerate() {
            let k = jb as i64 - (tap_lo + t as i64);
            gsamp[(k - k_lo) as usize] += h * bv;
        }
    }
    gsamp.iter().map(|v| v * v).sum::<f64>() * delta
}

/// `||u v||_{L2(R^3)}` for the physical-space product of two band fields.
pub fn band_product_norm(f: &SampledBand, g: &SampledBand) -> Result<f64> {
    let dxi = f.dxi;
    if g.dxi != dxi {
        return Err(ZlabError::GridMismatch(
            "band fields sampled with different spacings".into(),
        ));
    }
    let d2 = dxi * dxi;
    let bprof = [(&f.pieces[..], false), (&g.pieces[..], false)];
    let (blo, bhi) = support_of(&bprof);
    let cprof = [
        (&f.pieces[..], false),
        (&g.pieces[..], false),
        (&f.pieces[..], true),
        (&g.pieces[..], true),
    ];
    let (clo, chi) = support_of(&cprof);
    let ctable = KernelTable::build(clo, chi, TABLE_SAMPLES, |x| piece_convolution(&cprof, x));
    let width = f
        .pieces
        .iter()
        .chain(&g.pieces)
        .map(|p| p.1 - p.0)
        .fold(f64::INFINITY, f64::min);
    let delta = width / 16.0;
    let tap_lo = (blo / delta).floor() as i64;
    let tap_hi = (bhi / delta).ceil() as i64;
    let taps: Vec<f64> = (tap_lo..=tap_hi)
        .map(|m| piece_convolution(&bprof, m as f64 * delta))
        .collect();

    let (fi0, fi1) = f.i_range();
    let (gi0, gi1) = g.i_range();
    let (fj0, _) = f.j_range();
    let (gj0, _) = g.j_range();
    let fj1 = f.j_range().1;
    let gj1 = g.j_range().1;
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let mut hist: Vec<f64> = Vec::new();
    let mut gsamp: Vec<f64> = Vec::new();
    let mut total = 0.0;
    for i in (fi0 + gi0)..=(fi1 + gi1) {
        for j in (fj0 + gj0)..=(fj1 + gj1) {
            pts.clear();
            let lo = fi0.max(i - gi1);
            let hi = fi1.min(i - gi0);
            for i1 in lo..=hi {
                let (r0, r1) = f.row(i1);
                let (t0, t1) = g.row(i - i1);
                // j1 in f's row and j - j1 in g's row.
                let jlo = r0.max(j - t1);
                let jhi = r1.min(j - t0);
                for j1 in jlo..=jhi {
                    let a = f.at(i1, j1);
                    if a == 0.0 {
                        continue;
                    }
                    let b = g.at(i - i1, j - j1);
                    if b == 0.0 {
                        continue;
                    }
                    let (x1, y1) = (i1 as f64 * dxi, j1 as f64 * dxi);
                    let (x2, y2) = ((i - i1) as f64 * dxi, (j - j1) as f64 * dxi);
                    pts.push((f.surface.h(x1, y1) + g.surface.h(x2, y2), a * b));
                }
            }
            if pts.is_empty() {
                continue;
            }
            let (pmin, pmax) = pts
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.0), b.max(p.0)));
            let nbins = ((pmax - pmin) / delta).floor() as usize + 2;
            let m = pts.len();
            let pair_cost = m * m / 2;
            let bin_cost = nbins * taps.len() + m;
            let energy = if pair_cost <= bin_cost {
                pair_energy(&mut pts, &ctable)
            } else {
                binned_energy(&pts, pmin, nbins, delta, tap_lo, &taps, &mut hist, &mut gsamp)
            };
            total += energy;
        }
    }
    let norm2 = total * d2 * d2 * d2 / (2.0 * PI).powi(3);
    Ok(norm2.max(0.0).sqrt())
}

//! Sobolev, one-dimensional Besov and Bourgain-type norms on lattices, and the
//! time-cutoff scaling checks built from them.

use crate::cutoff::psi;
use crate::dyadic::DyadicScale;
use crate::error::{invalid, Result, ZlabError};
use crate::grid::{signed_index, SpaceTimeField, SpatialField};
use crate::projectors::Flavor;
use crate::solver::Trajectory;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Dyadic summability exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SumExponent {
    One,
    Two,
    Inf,
}

impl std::str::FromStr for SumExponent {
    type Err = ZlabError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(SumExponent::One),
            "2" => Ok(SumExponent::Two),
            "inf" | "Inf" | "infinity" => Ok(SumExponent::Inf),
            other => Err(invalid("p", format!("`{other}` is not one of 1, 2, inf"))),
        }
    }
}

/// Selects the norm `X^{flavor}_{sigma, b, p}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormSpec {
    pub flavor: Flavor,
    pub sigma: f64,
    pub b: f64,
    pub p: SumExponent,
}

impl NormSpec {
    pub fn new(flavor: Flavor, sigma: f64, b: f64, p: SumExponent) -> Self {
        NormSpec { flavor, sigma, b, p }
    }
}

/// Nonzero dyadic pieces at radius `r`: at most two `(exponent, psi_N(r))` pairs.
#[inline]
pub fn dyadic_pieces(r: f64) -> [(u32, f64); 2] {
    let a = r.abs();
    if a < 1.0 {
        return [(0, 1.0), (1, 0.0)];
    }
    let k = a.log2().floor().max(0.0) as u32;
    // guard the floor against rounding at exact powers of two
    let k = if (1u64 << k) as f64 > a { k - 1 } else { k };
    let w = psi(a / (1u64 << k) as f64);
    [(k, w), (k + 1, 1.0 - w)]
}

#[inline]
pub fn japanese(r: f64) -> f64 {
    (1.0 + r * r).sqrt()
}

/// `(sum <xi>^{2s} |u_hat|^2 dxi^2)^{1/2}`.
pub fn sobolev_norm(u: &SpatialField, s: f64) -> f64 {
    let d = u.grid.dxi();
    let mut acc = 0.0;
    for (i, v) in u.values.iter().enumerate() {
        let r = u.grid.abs_xi(i);
        acc += (1.0 + r * r).powf(s) * v.norm_sqr();
    }
    (acc * d * d).sqrt()
}

/// Homogeneous `(sum |xi|^{2s} |u_hat|^2 dxi^2)^{1/2}`; the origin is skipped.
pub fn homogeneous_sobolev_norm(u: &SpatialField, s: f64) -> f64 {
    let d = u.grid.dxi();
    let mut acc = 0.0;
    for (i, v) in u.values.iter().enumerate() {
        let r = u.grid.abs_xi(i);
        if r > 0.0 {
            acc += r.powf(2.0 * s) * v.norm_sqr();
        }
    }
    (acc * d * d).sqrt()
}

/// Dyadic block energies `||S_L P_N w||^2` with band metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockEnergies {
    /// `energy[n][l]` for N = 2^n, L = 2^l.
    pub energy: Vec<Vec<f64>>,
    /// The largest frequency band is only partially represented on the grid.
    pub frequency_truncated: bool,
    /// The largest modulation band is only partially represented on the grid.
    pub modulation_truncated: bool,
}

pub fn block_energies(w: &SpaceTimeField, flavor: Flavor) -> BlockEnergies {
    let g = &w.grid;
    let mut energy: Vec<Vec<f64>> = Vec::new();
    let vol = g.cell_volume();
    for (idx, v) in w.values.iter().enumerate() {
        let m2 = v.norm_sqr();
        if m2 == 0.0 {
            continue;
        }
        let (a, b, t) = g.zeta(idx);
        let r = a.hypot(b);
        let md = flavor.modulation(r, t);
        for (nk, nw) in dyadic_pieces(r) {
            if nw == 0.0 {
                continue;
            }
            for (lk, lw) in dyadic_pieces(md) {
                if lw == 0.0 {
                    continue;
                }
                let (nk, lk) = (nk as usize, lk as usize);
                if energy.len() <= nk {
                    energy.resize(nk + 1, Vec::new());
                }
                if energy[nk].len() <= lk {
                    energy[nk].resize(lk + 1, 0.0);
                }
                energy[nk][lk] += m2 * nw * nw * lw * lw * vol;
            }
        }
    }
    let fmax = g.spatial.max_abs_freq();
    let top_n = energy.len().saturating_sub(1);
    let frequency_truncated = !energy.is_empty() && 2.0 * (1u64 << top_n) as f64 > fmax;
    let mmax = crate::projectors::max_modulation(g, flavor);
    let top_l = energy.iter().map(|r| r.len()).max().unwrap_or(0).saturating_sub(1);
    let modulation_truncated = !energy.is_empty() && 2.0 * (1u64 << top_l) as f64 > mmax;
    BlockEnergies {
        energy,
        frequency_truncated,
        modulation_truncated,
    }
}

/// Combines block energies into the `X_{sigma, b, p}` norm.
pub fn combine_blocks(blocks: &[Vec<f64>], sigma: f64, b: f64, p: SumExponent) -> f64 {
    let mut total = 0.0;
    for (nk, row) in blocks.iter().enumerate() {
        let nw = (2f64).powi(nk as i32).powf(2.0 * sigma);
        let inner = match p {
            SumExponent::One => {
                let s: f64 = row
                    .iter()
                    .enumerate()
                    .map(|(lk, e)| (2f64).powi(lk as i32).powf(b) * e.sqrt())
                    .sum();
                s * s
            }
            SumExponent::Two => row
                .iter()
                .enumerate()
                .map(|(lk, e)| (2f64).powi(lk as i32).powf(2.0 * b) * e)
                .sum(),
            SumExponent::Inf => row
                .iter()
                .enumerate()
                .map(|(lk, e)| (2f64).powi(lk as i32).powf(2.0 * b) * e)
                .fold(0.0, f64::max),
        };
        total += nw * inner;
    }
    total.sqrt()
}

/// `||w||_{X^{flavor}_{sigma,b,p}}` as the dyadic double sum over the grid's bands.
pub fn bourgain_norm(w: &SpaceTimeField, spec: &NormSpec) -> f64 {
    let blocks = block_energies(w, spec.flavor);
    combine_blocks(&blocks.energy, spec.sigma, spec.b, spec.p)
}

/// Physical-time samples of the spatial transform: `f_hat(xi, t_m)` for
/// `t_m = m T_w / n_t`, from a space-time field.
pub fn time_slices(w: &SpaceTimeField) -> Vec<SpatialField> {
    let g = &w.grid;
    let nt = g.n_t;
    let mut planner = FftPlanner::new();
    let inv = planner.plan_fft_inverse(nt);
    let scale = g.dtau() / (2.0 * PI).sqrt();
    let ns = g.spatial.len();
    let mut out = vec![SpatialField::zeros(g.spatial); nt];
    let mut buf = vec![Complex64::new(0.0, 0.0); nt];
    for s in 0..ns {
        buf.copy_from_slice(&w.values[s * nt..(s + 1) * nt]);
        inv.process(&mut buf);
        for (m, v) in buf.iter().enumerate() {
            out[m].values[s] = v * scale;
        }
    }
    out
}

/// `sup_t ||f(t)||_{H^s}` over the physical time samples of `w`.
pub fn sup_time_sobolev(w: &SpaceTimeField, s: f64) -> f64 {
    time_slices(w)
        .iter()
        .map(|f| sobolev_norm(f, s))
        .fold(0.0, f64::max)
}

/// Samples of a function of one variable at `t_j = (j - n/2) dt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries1D {
    pub dt: f64,
    pub values: Vec<Complex64>,
}

impl TimeSeries1D {
    pub fn new(dt: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(invalid("dt", "must be positive"));
        }
        if values.is_empty() {
            return Err(ZlabError::Empty("time series"));
        }
        Ok(TimeSeries1D { dt, values })
    }

    pub fn from_fn(dt: f64, n: usize, f: impl Fn(f64) -> Complex64) -> Self {
        let values = (0..n).map(|j| f(Self::time_at(dt, n, j))).collect();
        TimeSeries1D { dt, values }
    }

    #[inline]
    fn time_at(dt: f64, n: usize, j: usize) -> f64 {
        (j as f64 - (n / 2) as f64) * dt
    }

    pub fn time(&self, j: usize) -> f64 {
        Self::time_at(self.dt, self.values.len(), j)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.dt).sqrt()
    }

    /// Pointwise product with `psi(t / T)`.
    pub fn cutoff(&self, t_cut: f64) -> TimeSeries1D {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(j, v)| v * psi(self.time(j) / t_cut))
            .collect();
        TimeSeries1D {
            dt: self.dt,
            values,
        }
    }

    /// `t -> int_0^t g` by the composite trapezoid rule from the sample at t = 0.
    pub fn integral_from_zero(&self) -> TimeSeries1D {
        let n = self.values.len();
        let z = n / 2;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for j in z + 1..n {
            out[j] = out[j - 1] + (self.values[j - 1] + self.values[j]) * (0.5 * self.dt);
        }
        for j in (0..z).rev() {
            out[j] = out[j + 1] - (self.values[j + 1] + self.values[j]) * (0.5 * self.dt);
        }
        TimeSeries1D {
            dt: self.dt,
            values: out,
        }
    }

    /// Frequencies and moduli of the unitary Fourier transform.
    pub fn spectrum(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.values.len();
        let mut buf = self.values.clone();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let s = self.dt / (2.0 * PI).sqrt();
        let dtau = 2.0 * PI / (n as f64 * self.dt);
        let taus = (0..n).map(|k| signed_index(k, n) as f64 * dtau).collect();
        let mods = buf.iter().map(|v| v.norm() * s).collect();
        (taus, mods)
    }

    /// `||P_L g||_{L^2}` for every dyadic L reached by the sampled frequencies.
    pub fn dyadic_block_norms(&self) -> Vec<f64> {
        let (taus, mods) = self.spectrum();
        let dtau = 2.0 * PI / (self.values.len() as f64 * self.dt);
        let mut e: Vec<f64> = Vec::new();
        for (t, m) in taus.iter().zip(&mods) {
            for (k, w) in dyadic_pieces(*t) {
                if w == 0.0 {
                    continue;
                }
                let k = k as usize;
                if e.len() <= k {
                    e.resize(k + 1, 0.0);
                }
                e[k] += (w * m).powi(2) * dtau;
            }
        }
        e.into_iter().map(f64::sqrt).collect()
    }
}

/// `||g||_{B^b_{2,1}}` (p = 1) or `||g||_{B^b_{2,inf}}` (p = inf).
pub fn besov_norm_1d(g: &TimeSeries1D, b: f64, p: SumExponent) -> Result<f64> {
    let blocks = g.dyadic_block_norms();
    let terms = blocks
        .iter()
        .enumerate()
        .map(|(k, v)| (2f64).powi(k as i32).powf(b) * v);
    match p {
        SumExponent::One => Ok(terms.sum()),
        SumExponent::Inf => Ok(terms.fold(0.0, f64::max)),
        SumExponent::Two => Err(invalid("p", "1D Besov norms use p = 1 or inf")),
    }
}

/// Both sides of the low/high frequency splitting of `||g psi_T||_{B^b_{2,1}}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormEquiv {
    pub lhs: f64,
    pub rhs: f64,
    /// `T^{-b} ||P_{<= 1/T}(g psi_T)||`
    pub low_term: f64,
    /// `sum_{L > 1/T} L^b ||P_L (g psi_T)||`
    pub high_term: f64,
}

pub fn norm_equiv_check(g: &TimeSeries1D, t_cut: f64, b: f64) -> Result<NormEquiv> {
    if !(b > 0.0 && b <= 0.5) {
        return Err(invalid("b", "need 0 < b <= 1/2"));
    }
    if !(t_cut > 0.0 && t_cut <= 1.0) {
        return Err(invalid("T", "need 0 < T <= 1"));
    }
    let gc = g.cutoff(t_cut);
    let lhs = besov_norm_1d(&gc, b, SumExponent::One)?;
    let (taus, mods) = gc.spectrum();
    let dtau = 2.0 * PI / (gc.len() as f64 * gc.dt);
    // largest dyadic L <= 1/T; P_{<= 1/T} = sum_{L <= Lmax} P_L has symbol psi(tau / Lmax)
    let lmax_exp = (1.0 / t_cut).log2().floor().max(0.0) as u32;
    let lmax = (1u64 << lmax_exp) as f64;
    let mut low = 0.0;
    for (t, m) in taus.iter().zip(&mods) {
        low += (psi(t / lmax) * m).powi(2) * dtau;
    }
    let low_term = t_cut.powf(-b) * low.sqrt();
    let blocks = gc.dyadic_block_norms();
    let high_term: f64 = blocks
        .iter()
        .enumerate()
        .filter(|(k, _)| *k as u32 > lmax_exp)
        .map(|(k, v)| (2f64).powi(k as i32).powf(b) * v)
        .sum();
    Ok(NormEquiv {
        lhs,
        rhs: low_term + high_term,
        low_term,
        high_term,
    })
}

/// `||g psi_T||_{B^b_{2,1}} / (T^{1/2 - b} ||g||_{B^{1/2}_{2,1}})`.
pub fn besov_scaling_check(g: &TimeSeries1D, t_cut: f64, b: f64) -> Result<f64> {
    if !(b > 0.0 && b < 0.5) {
        return Err(invalid("b", "need 0 < b < 1/2"));
    }
    if !(t_cut > 0.0 && t_cut <= 1.0) {
        return Err(invalid("T", "need 0 < T <= 1"));
    }
    let den = t_cut.powf(0.5 - b) * besov_norm_1d(g, 0.5, SumExponent::One)?;
    if den == 0.0 {
        return Ok(0.0);
    }
    Ok(besov_norm_1d(&g.cutoff(t_cut), b, SumExponent::One)? / den)
}

/// `||psi_T I(g)||_{B^{1/2}_{2,1}} / (T^{1/12} ||g||_{B^{-5/12}_{2,inf}})`,
/// `I(g)(t) = int_0^t g`.
pub fn besov_duhamel_check(g: &TimeSeries1D, t_cut: f64) -> Result<f64> {
    if !(t_cut > 0.0 && t_cut <= 1.0) {
        return Err(invalid("T", "need 0 < T <= 1"));
    }
    let den = t_cut.powf(1.0 / 12.0) * besov_norm_1d(g, -5.0 / 12.0, SumExponent::Inf)?;
    if den == 0.0 {
        return Ok(0.0);
    }
    let num = besov_norm_1d(&g.integral_from_zero().cutoff(t_cut), 0.5, SumExponent::One)?;
    Ok(num / den)
}

/// Initial data `(u0, n0, n1)` for the Zakharov system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataTriple {
    pub u0: SpatialField,
    pub n0: SpatialField,
    pub n1: SpatialField,
}

/// Largest imaginary part of the physical samples, relative to the largest modulus.
pub fn relative_imaginary_part(f: &SpatialField) -> f64 {
    let phys = f.to_physical();
    let m = phys.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if m == 0.0 {
        return 0.0;
    }
    phys.iter().map(|v| v.im.abs()).fold(0.0, f64::max) / m
}

impl DataTriple {
    pub fn new(u0: SpatialField, n0: SpatialField, n1: SpatialField) -> Result<Self> {
        crate::grid::check_same(&u0.grid, &n0.grid)?;
        crate::grid::check_same(&u0.grid, &n1.grid)?;
        for (name, f) in [("n0", &n0), ("n1", &n1)] {
            if relative_imaginary_part(f) > 1e-12 {
                return Err(invalid(name, "wave data must be real-valued"));
            }
        }
        Ok(DataTriple { u0, n0, n1 })
    }
}

/// `(||u0||^2_{H^k} + ||n0||^2_{H^l} + ||n1||^2_{H^{l-1}})^{1/2}`.
pub fn product_norm(d: &DataTriple, k: f64, l: f64) -> f64 {
    let a = sobolev_norm(&d.u0, k);
    let b = sobolev_norm(&d.n0, l);
    let c = sobolev_norm(&d.n1, l - 1.0);
    (a * a + b * b + c * c).sqrt()
}

/// `(R, r)`: the full data norm and `||u0||_{L^2}`, the inputs of the lifespan formula.
pub fn lifespan_inputs(d: &DataTriple, k: f64, l: f64) -> (f64, f64) {
    (product_norm(d, k, l), sobolev_norm(&d.u0, 0.0))
}

/// `(sup_t ||u||^2_{H^k} + sup_t ||n||^2_{H^l} + sup_t ||dt n||^2_{H^{l-1}})^{1/2}` over snapshots.
pub fn xkl_trajectory_norm(traj: &Trajectory, k: f64, l: f64) -> Result<f64> {
    if traj.snapshots.is_empty() {
        return Err(ZlabError::Empty("trajectory"));
    }
    let (mut su, mut sn, mut sd) = (0.0f64, 0.0f64, 0.0f64);
    for s in &traj.snapshots {
        let (n, dtn) = crate::solver::reconstruct(&s.v);
        su = su.max(sobolev_norm(&s.u, k));
        sn = sn.max(sobolev_norm(&n, l));
        sd = sd.max(sobolev_norm(&dtn, l - 1.0));
    }
    Ok((su * su + sn * sn + sd * sd).sqrt())
}

/// Exponents of the dyadic bands used by a norm on the given scale.
pub fn band_value(k: usize) -> DyadicScale {
    DyadicScale::from_exponent(k as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutoff::psi_n;
    use crate::dyadic::dy;

    #[test]
    fn dyadic_pieces_match_psi_n() {
        for i in 0..4000 {
            let r = i as f64 * 0.013;
            let pieces = dyadic_pieces(r);
            for k in 0..12u32 {
                let expect = psi_n(DyadicScale::from_exponent(k), r);
                let got: f64 = pieces.iter().filter(|p| p.0 == k).map(|p| p.1).sum();
                assert!((expect - got).abs() < 1e-15, "r={r} k={k}");
            }
        }
        let _ = dy(1);
    }

    #[test]
    fn besov_single_block() {
        // g with spectrum inside |tau| <= 1 lives in the L = 1 block only
        let g = TimeSeries1D::from_fn(0.05, 4096, |t| {
            let x = t / 16.0;
            Complex64::new((-(x * x)).exp(), 0.0)
        });
        let b1 = besov_norm_1d(&g, 0.3, SumExponent::One).unwrap();
        assert!((b1 - g.l2_norm()).abs() < 1e-10 * g.l2_norm());
    }
}

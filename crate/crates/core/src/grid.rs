//! Periodic lattices in frequency (and time-frequency), the fields that live on
//! them, and the FFT plumbing between Fourier coefficients and physical samples.
//!
//! Storage is FFT order: index `k` in `0..n` stands for the signed index
//! `k` (k < n/2) or `k - n` (k >= n/2), and frequency `signed / M`.
//! Coefficients are normalised so that `sum |u_hat|^2 dxi^2` equals the L2 norm
//! of the physical field, which is the continuum Plancherel identity.

use crate::error::{invalid, Result, ZlabError};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

#[inline]
pub fn signed_index(k: usize, n: usize) -> i64 {
    if k < n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Inverse of [`signed_index`]; `None` when the index is not on the lattice.
#[inline]
pub fn storage_index(s: i64, n: usize) -> Option<usize> {
    let h = (n / 2) as i64;
    if s < -h || s >= h {
        None
    } else if s >= 0 {
        Some(s as usize)
    } else {
        Some((s + n as i64) as usize)
    }
}

/// Square periodic lattice: physical side `2 pi M`, `n` points per dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    pub half_period: f64,
    pub n: usize,
}

impl FrequencyGrid {
    pub fn new(half_period: f64, n: usize) -> Result<Self> {
        if !(half_period > 0.0 && half_period.is_finite()) {
            return Err(invalid("half_period", "must be positive and finite"));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(invalid("n", format!("{n} must be a power of two >= 8")));
        }
        Ok(FrequencyGrid { half_period, n })
    }

    pub fn dxi(&self) -> f64 {
        1.0 / self.half_period
    }

    pub fn dx(&self) -> f64 {
        2.0 * PI * self.half_period / self.n as f64
    }

    /// Largest frequency along an axis, n dxi / 2.
    pub fn nyquist(&self) -> f64 {
        self.n as f64 * self.dxi() / 2.0
    }

    /// Largest |xi| on the lattice (the corner).
    pub fn max_abs_freq(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.nyquist()
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn freq_1d(&self, k: usize) -> f64 {
        signed_index(k, self.n) as f64 * self.dxi()
    }

    #[inline]
    pub fn xi(&self, idx: usize) -> (f64, f64) {
        (self.freq_1d(idx / self.n), self.freq_1d(idx % self.n))
    }

    #[inline]
    pub fn abs_xi(&self, idx: usize) -> f64 {
        let (a, b) = self.xi(idx);
        a.hypot(b)
    }

    /// True for points on the Nyquist planes (signed index -n/2 in either axis).
    #[inline]
    pub fn on_nyquist(&self, idx: usize) -> bool {
        idx / self.n == self.n / 2 || idx % self.n == self.n / 2
    }

    /// Physical coordinate of storage index `j` along an axis (origin at index 0).
    #[inline]
    pub fn x_1d(&self, j: usize) -> f64 {
        signed_index(j, self.n) as f64 * self.dx()
    }

    pub fn x(&self, idx: usize) -> (f64, f64) {
        (self.x_1d(idx / self.n), self.x_1d(idx % self.n))
    }

    /// Storage index of the point reflected through the origin.
    #[inline]
    pub fn reflect(&self, idx: usize) -> usize {
        let n = self.n;
        let (i, j) = (idx / n, idx % n);
        ((n - i) % n) * n + (n - j) % n
    }
}

/// Space-time lattice: a spatial lattice plus `n_t` temporal frequencies with
/// spacing `2 pi / T_w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceTimeGrid {
    pub spatial: FrequencyGrid,
    pub time_window: f64,
    pub n_t: usize,
}

impl SpaceTimeGrid {
    pub fn new(spatial: FrequencyGrid, time_window: f64, n_t: usize) -> Result<Self> {
        if !(time_window > 0.0 && time_window.is_finite()) {
            return Err(invalid("time_window", "must be positive and finite"));
        }
        if n_t < 8 || !n_t.is_power_of_two() {
            return Err(invalid("n_t", format!("{n_t} must be a power of two >= 8")));
        }
        Ok(SpaceTimeGrid {
            spatial,
            time_window,
            n_t,
        })
    }

    pub fn dtau(&self) -> f64 {
        2.0 * PI / self.time_window
    }

    pub fn tau_nyquist(&self) -> f64 {
        self.n_t as f64 * self.dtau() / 2.0
    }

    pub fn cell_volume(&self) -> f64 {
        let d = self.spatial.dxi();
        d * d * self.dtau()
    }

    pub fn len(&self) -> usize {
        self.spatial.len() * self.n_t
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn tau(&self, l: usize) -> f64 {
        signed_index(l, self.n_t) as f64 * self.dtau()
    }

    /// Splits a flat index into (spatial index, temporal index).
    #[inline]
    pub fn split(&self, idx: usize) -> (usize, usize) {
        (idx / self.n_t, idx % self.n_t)
    }

    #[inline]
    pub fn zeta(&self, idx: usize) -> (f64, f64, f64) {
        let (s, l) = self.split(idx);
        let (a, b) = self.spatial.xi(s);
        (a, b, self.tau(l))
    }

    pub fn on_nyquist(&self, idx: usize) -> bool {
        let (s, l) = self.split(idx);
        self.spatial.on_nyquist(s) || l == self.n_t / 2
    }

    pub fn reflect(&self, idx: usize) -> usize {
        let (s, l) = self.split(idx);
        self.spatial.reflect(s) * self.n_t + (self.n_t - l) % self.n_t
    }
}

/// Fourier coefficients of a function of x on a [`FrequencyGrid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpatialField {
    pub grid: FrequencyGrid,
    pub values: Vec<Complex64>,
}

impl SpatialField {
    pub fn zeros(grid: FrequencyGrid) -> Self {
        SpatialField {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_values(grid: FrequencyGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(ZlabError::GridMismatch(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(invalid("values", "non-finite entry"));
        }
        Ok(SpatialField { grid, values })
    }

    /// Coefficients given by a function of the frequency vector.
    pub fn from_fn(grid: FrequencyGrid, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let values = (0..grid.len())
            .map(|i| {
                let (a, b) = grid.xi(i);
                f(a, b)
            })
            .collect();
        SpatialField { grid, values }
    }

    /// Transform of physical samples given by a function of x.
    pub fn from_physical_fn(grid: FrequencyGrid, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let phys: Vec<Complex64> = (0..grid.len())
            .map(|i| {
                let (a, b) = grid.x(i);
                f(a, b)
            })
            .collect();
        Self::from_physical(grid, phys)
    }

    pub fn from_physical(grid: FrequencyGrid, mut phys: Vec<Complex64>) -> Self {
        assert_eq!(phys.len(), grid.len());
        let fft = Fft2::new(grid.n);
        fft.forward(&mut phys);
        let s = grid.dx() * grid.dx() / (2.0 * PI);
        for v in phys.iter_mut() {
            *v *= s;
        }
        SpatialField { grid, values: phys }
    }

    /// Physical samples on the x-lattice.
    pub fn to_physical(&self) -> Vec<Complex64> {
        let mut out = self.values.clone();
        Fft2::new(self.grid.n).inverse(&mut out);
        let s = self.grid.dxi() * self.grid.dxi() / (2.0 * PI);
        for v in out.iter_mut() {
            *v *= s;
        }
        out
    }

    pub fn l2_norm(&self) -> f64 {
        let d = self.grid.dxi();
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * d * d).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        SpatialField {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &SpatialField) -> Result<Self> {
        check_same(&self.grid, &other.grid)?;
        Ok(SpatialField {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &SpatialField) -> Result<Self> {
        check_same(&self.grid, &other.grid)?;
        Ok(SpatialField {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Multiplies every coefficient by `m(xi1, xi2)`.
    pub fn multiplier(&self, m: impl Fn(f64, f64) -> Complex64) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let (a, b) = self.grid.xi(i);
                v * m(a, b)
            })
            .collect();
        SpatialField {
            grid: self.grid,
            values,
        }
    }

    /// Coefficients of the complex conjugate function: `conj(u_hat(-xi))`.
    pub fn conjugate(&self) -> Self {
        let values = (0..self.values.len())
            .map(|i| self.values[self.grid.reflect(i)].conj())
            .collect();
        SpatialField {
            grid: self.grid,
            values,
        }
    }

    /// Coefficients of the real part `(u + conj u) / 2` of the physical field.
    pub fn real_part(&self) -> Self {
        let c = self.conjugate();
        SpatialField {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&c.values)
                .map(|(a, b)| (a + b) * 0.5)
                .collect(),
        }
    }
}

/// Fourier-side values of a space-time function on a [`SpaceTimeGrid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceTimeField {
    pub grid: SpaceTimeGrid,
    pub values: Vec<Complex64>,
}

impl SpaceTimeField {
    pub fn zeros(grid: SpaceTimeGrid) -> Self {
        SpaceTimeField {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_values(grid: SpaceTimeGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(ZlabError::GridMismatch(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(invalid("values", "non-finite entry"));
        }
        Ok(SpaceTimeField { grid, values })
    }

    pub fn from_fn(grid: SpaceTimeGrid, f: impl Fn(f64, f64, f64) -> Complex64) -> Self {
        let values = (0..grid.len())
            .map(|i| {
                let (a, b, t) = grid.zeta(i);
                f(a, b, t)
            })
            .collect();
        SpaceTimeField { grid, values }
    }

    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.cell_volume()).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        SpaceTimeField {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &SpaceTimeField) -> Result<Self> {
        if self.grid != other.grid {
            return Err(ZlabError::GridMismatch("space-time grids differ".into()));
        }
        Ok(SpaceTimeField {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn multiplier(&self, m: impl Fn(f64, f64, f64) -> f64) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let (a, b, t) = self.grid.zeta(i);
                v * m(a, b, t)
            })
            .collect();
        SpaceTimeField {
            grid: self.grid,
            values,
        }
    }

    /// Fourier transform of the conjugate function: `conj(w(-zeta))`.
    pub fn conjugate(&self) -> Self {
        let values = (0..self.values.len())
            .map(|i| self.values[self.grid.reflect(i)].conj())
            .collect();
        SpaceTimeField {
            grid: self.grid,
            values,
        }
    }
}

pub(crate) fn check_same(a: &FrequencyGrid, b: &FrequencyGrid) -> Result<()> {
    if a != b {
        Err(ZlabError::GridMismatch(format!("{a:?} vs {b:?}")))
    } else {
        Ok(())
    }
}

/// Unnormalised 2D FFT on an n x n row-major array.
pub struct Fft2 {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Fft2 {
            n,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.run(data, &self.fwd);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.run(data, &self.inv);
    }

    fn run(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        assert_eq!(data.len(), n * n);
        plan.process(data);
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            for i in 0..n {
                col[i] = data[i * n + j];
            }
            plan.process(&mut col);
            for i in 0..n {
                data[i * n + j] = col[i];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        for n in [8usize, 16] {
            for k in 0..n {
                assert_eq!(storage_index(signed_index(k, n), n), Some(k));
            }
            assert_eq!(storage_index(n as i64 / 2, n), None);
        }
    }

    #[test]
    fn physical_round_trip_and_parseval() {
        let g = FrequencyGrid::new(2.0, 32).unwrap();
        let u = SpatialField::from_physical_fn(g, |x, y| {
            Complex64::new((-(x * x + y * y) / 2.0).exp(), 0.1 * x.sin())
        });
        let phys = u.to_physical();
        let back = SpatialField::from_physical(g, phys.clone());
        for (a, b) in u.values.iter().zip(&back.values) {
            assert!((a - b).norm() < 1e-13);
        }
        let dx = g.dx();
        let l2_phys = (phys.iter().map(|v| v.norm_sqr()).sum::<f64>() * dx * dx).sqrt();
        assert!((l2_phys - u.l2_norm()).abs() < 1e-12 * l2_phys);
    }

    #[test]
    fn gaussian_transform_matches_continuum() {
        // e^{-|x|^2/2} has unitary transform e^{-|xi|^2/2}
        let g = FrequencyGrid::new(4.0, 64).unwrap();
        let u = SpatialField::from_physical_fn(g, |x, y| {
            Complex64::new((-(x * x + y * y) / 2.0).exp(), 0.0)
        });
        for i in 0..g.len() {
            let (a, b) = g.xi(i);
            let exact = (-(a * a + b * b) / 2.0).exp();
            assert!((u.values[i].re - exact).abs() < 1e-12, "{i}");
        }
    }
}

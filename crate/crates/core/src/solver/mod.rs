//! Pseudo-spectral solvers for the reduced Zakharov system and cubic NLS,
//! linear groups and Duhamel integrals, the ground state, and the
//! self-similar blow-up ansatz.

mod ansatz;
mod ground_state;
mod integrate;

pub use ansatz::{
    ansatz_eval, blowup_norm_trace, fourier_resample, lifespan_bound, radial_asymmetry, rescale_solution,
    AnsatzSpec, BlowupRow,
};
pub use ground_state::{ground_state, GroundState};
pub use integrate::{evolve_steps, solve_nls, solve_reduced, solve_speed, step_reduced};

use crate::error::{invalid, Result};
use crate::grid::{FrequencyGrid, SpatialField};
use crate::norms::{japanese, sobolev_norm};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Time integrator for the reduced system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Integrator {
    StrangSplit,
    InteractionRK4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub grid: FrequencyGrid,
    pub dt: f64,
    pub wave_speed: f64,
    pub dealias: bool,
    pub integrator: Integrator,
    pub snapshot_every: usize,
    /// Switches the nonlinear coupling off, leaving the exact linear groups.
    pub nonlinear: bool,
}

impl SolverConfig {
    pub fn new(grid: FrequencyGrid, dt: f64) -> Self {
        SolverConfig {
            grid,
            dt,
            wave_speed: 1.0,
            dealias: true,
            integrator: Integrator::StrangSplit,
            snapshot_every: 100,
            nonlinear: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(invalid("dt", "must be positive"));
        }
        if !(self.wave_speed >= 1.0 && self.wave_speed.is_finite()) {
            return Err(invalid("wave_speed", "must be >= 1"));
        }
        if self.snapshot_every == 0 {
            return Err(invalid("snapshot_every", "must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverState {
    pub u: SpatialField,
    pub v: SpatialField,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub t: f64,
    pub mass: f64,
    pub hm12_n: f64,
    pub hm32_dtn: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub config: SolverConfig,
    pub snapshots: Vec<SolverState>,
    pub diagnostics: Vec<Diagnostics>,
}

impl Trajectory {
    pub fn last(&self) -> &SolverState {
        self.snapshots.last().expect("trajectory has at least the initial snapshot")
    }
}

/// Symbol of the wave group at speed lambda: `(1 + lambda^2 |xi|^2)^{1/2}`.
/// Equals `lambda (lambda^{-2} + |xi|^2)^{1/2}` and reduces to `<xi>` at lambda = 1.
#[inline]
pub fn wave_symbol(lambda: f64, abs_xi: f64) -> f64 {
    (1.0 + lambda * lambda * abs_xi * abs_xi).sqrt()
}

pub fn diagnostics(state: &SolverState, lambda: f64) -> Diagnostics {
    let (n, dtn) = reconstruct_speed(&state.v, lambda);
    let m = state.u.l2_norm();
    Diagnostics {
        t: state.t,
        mass: m * m,
        hm12_n: sobolev_norm(&n, -0.5),
        hm32_dtn: sobolev_norm(&dtn, -1.5),
    }
}

/// `v0 = n0 + i <nabla>^{-1} n1`; wave data must be real.
pub fn reduce_data(
    u0: &SpatialField,
    n0: &SpatialField,
    n1: &SpatialField,
) -> Result<(SpatialField, SpatialField)> {
    reduce_data_speed(u0, n0, n1, 1.0)
}

/// As [`reduce_data`] with the speed-lambda symbol in place of `<xi>`.
pub fn reduce_data_speed(
    u0: &SpatialField,
    n0: &SpatialField,
    n1: &SpatialField,
    lambda: f64,
) -> Result<(SpatialField, SpatialField)> {
    crate::grid::check_same(&u0.grid, &n0.grid)?;
    crate::grid::check_same(&u0.grid, &n1.grid)?;
    for (name, f) in [("n0", n0), ("n1", n1)] {
        if crate::norms::relative_imaginary_part(f) > 1e-12 {
            return Err(invalid(name, "wave data must be real-valued"));
        }
    }
    let mut v = n0.clone();
    for i in 0..v.values.len() {
        let w = wave_symbol(lambda, n0.grid.abs_xi(i));
        v.values[i] += Complex64::i() * n1.values[i] / w;
    }
    Ok((u0.clone(), v))
}

/// `(n, dt n) = (Re v, <nabla> Im v)`. The returned `n` has exactly Hermitian
/// coefficients, so its physical samples are real.
pub fn reconstruct(v: &SpatialField) -> (SpatialField, SpatialField) {
    reconstruct_speed(v, 1.0)
}

pub fn reconstruct_speed(v: &SpatialField, lambda: f64) -> (SpatialField, SpatialField) {
    let g = v.grid;
    let mut n = SpatialField::zeros(g);
    let mut dtn = SpatialField::zeros(g);
    for i in 0..g.len() {
        let a = v.values[i];
        let b = v.values[g.reflect(i)].conj();
        n.values[i] = (a + b) * 0.5;
        let im = (a - b) * Complex64::new(0.0, -0.5);
        dtn.values[i] = im * wave_symbol(lambda, g.abs_xi(i));
    }
    (n, dtn)
}

/// `e^{it Delta} phi`: multiplier `e^{-it|xi|^2}`.
pub fn free_schrodinger(phi: &SpatialField, t: f64) -> SpatialField {
    phi.multiplier(|a, b| Complex64::from_polar(1.0, -t * (a * a + b * b)))
}

/// `e^{-it<nabla>} phi`.
pub fn free_halfwave(phi: &SpatialField, t: f64) -> SpatialField {
    phi.multiplier(|a, b| Complex64::from_polar(1.0, -t * japanese(a.hypot(b))))
}

fn quadrature_weights(steps: usize) -> Vec<f64> {
    let mut w = vec![0.0; steps + 1];
    if steps == 1 {
        w[0] = 0.5;
        w[1] = 0.5;
        return w;
    }
    // composite Simpson on an even prefix, Simpson 3/8 on the last three intervals if odd
    let simpson_end = if steps % 2 == 0 { steps } else { steps - 3 };
    let mut k = 0;
    while k < simpson_end {
        w[k] += 1.0 / 3.0;
        w[k + 1] += 4.0 / 3.0;
        w[k + 2] += 1.0 / 3.0;
        k += 2;
    }
    if steps % 2 == 1 {
        let s = simpson_end;
        w[s] += 3.0 / 8.0;
        w[s + 1] += 9.0 / 8.0;
        w[s + 2] += 9.0 / 8.0;
        w[s + 3] += 3.0 / 8.0;
    }
    w
}

fn duhamel_generic(
    f: &dyn Fn(f64) -> SpatialField,
    t: f64,
    dt_quad: f64,
    phase: &dyn Fn(f64) -> f64,
) -> Result<SpatialField> {
    if !(dt_quad > 0.0) {
        return Err(invalid("dt_quad", "must be positive"));
    }
    if t == 0.0 {
        return Ok(SpatialField::zeros(f(0.0).grid));
    }
    let steps_f = (t.abs() / dt_quad).round();
    if steps_f < 1.0 || ((steps_f * dt_quad) - t.abs()).abs() > 1e-9 * t.abs().max(1.0) {
        return Err(invalid("dt_quad", "must divide t"));
    }
    let steps = steps_f as usize;
    let h = t / steps as f64;
    let w = quadrature_weights(steps);
    let mut acc: Option<SpatialField> = None;
    for (m, wm) in w.iter().enumerate() {
        let s = m as f64 * h;
        let fs = f(s);
        let g = fs.grid;
        let term: Vec<Complex64> = fs
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| v * Complex64::from_polar(wm * h, -(t - s) * phase(g.abs_xi(i))))
            .collect();
        match acc.as_mut() {
            None => acc = Some(SpatialField { grid: g, values: term }),
            Some(a) => {
                for (x, y) in a.values.iter_mut().zip(term) {
                    *x += y;
                }
            }
        }
    }
    Ok(acc.expect("at least one node"))
}

/// `int_0^t e^{i(t-s)Delta} f(s) ds` by composite Simpson quadrature.
pub fn duhamel_s(f: &dyn Fn(f64) -> SpatialField, t: f64, dt_quad: f64) -> Result<SpatialField> {
    duhamel_generic(f, t, dt_quad, &|r| r * r)
}

/// `int_0^t e^{-i(t-s)<nabla>} f(s) ds` by composite Simpson quadrature.
pub fn duhamel_w(f: &dyn Fn(f64) -> SpatialField, t: f64, dt_quad: f64) -> Result<SpatialField> {
    duhamel_generic(f, t, dt_quad, &japanese)
}

pub(crate) fn h1_norm(u: &SpatialField) -> f64 {
    sobolev_norm(u, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_weights_integrate_cubics() {
        for steps in 1..9 {
            let w = quadrature_weights(steps);
            let h = 1.0 / steps as f64;
            let s: f64 = w.iter().enumerate().map(|(k, wk)| wk * h * (k as f64 * h).powi(2)).sum();
            let tol = if steps == 1 { 0.2 } else { 1e-13 };
            assert!((s - 1.0 / 3.0).abs() < tol, "steps {steps}: {s}");
        }
    }
}

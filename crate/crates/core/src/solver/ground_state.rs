use crate::error::{invalid, Result, ZlabError};
use crate::grid::{FrequencyGrid, SpatialField};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const MAX_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundState {
    pub q: SpatialField,
    pub iterations: usize,
    /// Relative change of the last iteration.
    pub residual: f64,
    /// `||-Q + Delta Q + Q^3||_{L^2}`.
    pub pde_residual: f64,
    /// `||Q||^2_{L^2}`.
    pub mass: f64,
}

fn cube(q: &SpatialField) -> SpatialField {
    let phys: Vec<Complex64> = q
        .to_physical()
        .into_iter()
        .map(|z| Complex64::new(z.re * z.re * z.re, 0.0))
        .collect();
    SpatialField::from_physical(q.grid, phys)
}

fn realify(q: SpatialField) -> SpatialField {
    let phys: Vec<Complex64> = q
        .to_physical()
        .into_iter()
        .map(|z| Complex64::new(z.re, 0.0))
        .collect();
    SpatialField::from_physical(q.grid, phys)
}

/// `||-Q + Delta Q + Q^3||_{L^2}`.
pub fn gs_residual(q: &SpatialField) -> f64 {
    let c = cube(q);
    let mut r = SpatialField::zeros(q.grid);
    for i in 0..q.values.len() {
        let k = q.grid.abs_xi(i);
        r.values[i] = -q.values[i] * (1.0 + k * k) + c.values[i];
    }
    r.l2_norm()
}

/// Positive radial solution of `-Q + Delta Q + Q^3 = 0` by Petviashvili
/// iteration from a Gaussian seed.
pub fn ground_state(grid: FrequencyGrid, tol: f64) -> Result<GroundState> {
    if !(tol > 0.0) {
        return Err(invalid("tol", "must be positive"));
    }
    if std::f64::consts::PI * grid.half_period < 10.0 {
        return Err(invalid("grid", "domain half-width must be at least 10"));
    }
    let mut q = SpatialField::from_physical_fn(grid, |x, y| {
        Complex64::new(2.0 * (-(x * x + y * y) / 2.0).exp(), 0.0)
    });
    let symbol: Vec<f64> = (0..grid.len())
        .map(|i| {
            let k = grid.abs_xi(i);
            1.0 + k * k
        })
        .collect();
    let mut residual = f64::INFINITY;
    for it in 1..=MAX_ITERATIONS {
        let c = cube(&q);
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..q.values.len() {
            num += symbol[i] * q.values[i].norm_sqr();
            den += (c.values[i] * q.values[i].conj()).re;
        }
        let s = num / den;
        let f = s.powf(1.5);
        let mut next = SpatialField::zeros(grid);
        for i in 0..q.values.len() {
            next.values[i] = c.values[i] * (f / symbol[i]);
        }
        let next = realify(next);
        let diff = next.sub(&q)?.l2_norm();
        residual = diff / next.l2_norm();
        q = next;
        if residual <= tol {
            let pde_residual = gs_residual(&q);
            if pde_residual > 10.0 * tol {
                continue;
            }
            let m = q.l2_norm();
            return Ok(GroundState {
                q,
                iterations: it,
                residual,
                pde_residual,
                mass: m * m,
            });
        }
    }
    Err(ZlabError::NoConvergence {
        iterations: MAX_ITERATIONS,
        residual,
    })
}

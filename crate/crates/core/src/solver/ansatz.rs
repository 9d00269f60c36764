use super::{reconstruct_speed, wave_symbol, SolverConfig, SolverState, Trajectory};
use crate::error::{invalid, Result};
use crate::grid::{FrequencyGrid, SpatialField};
use crate::norms::{homogeneous_sobolev_norm, japanese};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Evaluates the trigonometric interpolant of `f` at the tensor points
/// `(xs[a], ys[b])`; points outside the fundamental domain evaluate to zero.
/// Returns a row-major `xs.len() x ys.len()` array.
pub fn fourier_resample(f: &SpatialField, xs: &[f64], ys: &[f64]) -> Vec<Complex64> {
    let g = f.grid;
    let n = g.n;
    let half = PI * g.half_period;
    let scale = g.dxi() * g.dxi() / (2.0 * PI);
    let freqs: Vec<f64> = (0..n).map(|k| g.freq_1d(k)).collect();
    // contract over xi_2 first
    let mut tmp = vec![Complex64::new(0.0, 0.0); n * ys.len()];
    for (b, &y) in ys.iter().enumerate() {
        let e: Vec<Complex64> = freqs.iter().map(|k| Complex64::from_polar(1.0, k * y)).collect();
        for k1 in 0..n {
            let row = &f.values[k1 * n..(k1 + 1) * n];
            let mut acc = Complex64::new(0.0, 0.0);
            for k2 in 0..n {
                acc += row[k2] * e[k2];
            }
            tmp[k1 * ys.len() + b] = acc;
        }
    }
    let mut out = vec![Complex64::new(0.0, 0.0); xs.len() * ys.len()];
    for (a, &x) in xs.iter().enumerate() {
        if x.abs() >= half {
            continue;
        }
        let e: Vec<Complex64> = freqs.iter().map(|k| Complex64::from_polar(1.0, k * x)).collect();
        for (b, &y) in ys.iter().enumerate() {
            if y.abs() >= half {
                continue;
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for k1 in 0..n {
                acc += e[k1] * tmp[k1 * ys.len() + b];
            }
            out[a * ys.len() + b] = acc * scale;
        }
    }
    out
}

/// Parameters of the self-similar blow-up family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub omega: f64,
    pub theta: f64,
    pub t_blow: f64,
    pub profile_p: SpatialField,
    pub profile_n: SpatialField,
}

/// Largest |value| difference between a field and its images under the square's
/// symmetries plus a ring comparison (axis vs diagonal), relative to the maximum.
pub fn radial_asymmetry(f: &SpatialField) -> f64 {
    let g = f.grid;
    let phys = f.to_physical();
    let m = phys.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if m == 0.0 {
        return 0.0;
    }
    let half = PI * g.half_period;
    let radii: Vec<f64> = (1..8).map(|k| half * k as f64 / 16.0).collect();
    let mut worst = 0.0f64;
    for &r in &radii {
        let axis = fourier_resample(f, &[r], &[0.0])[0];
        let d = r / std::f64::consts::SQRT_2;
        let diag = fourier_resample(f, &[d], &[d])[0];
        worst = worst.max((axis - diag).norm() / m);
    }
    worst
}

impl AnsatzSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0) {
            return Err(invalid("omega", "must be positive"));
        }
        if !(self.t_blow > 0.0) {
            return Err(invalid("t_blow", "must be positive"));
        }
        if crate::norms::relative_imaginary_part(&self.profile_n) > 1e-10 {
            return Err(invalid("profile_n", "must be real"));
        }
        for (name, f) in [("profile_p", &self.profile_p), ("profile_n", &self.profile_n)] {
            if radial_asymmetry(f) > 1e-6 {
                return Err(invalid(name, "profile is not radially symmetric within 1e-6"));
            }
        }
        Ok(())
    }

    /// `s = (T - t) / omega`.
    pub fn scale_at(&self, t: f64) -> Result<f64> {
        if t >= self.t_blow {
            return Err(invalid("t", format!("{t} is not before the blow-up time")));
        }
        Ok((self.t_blow - t) / self.omega)
    }
}

fn effective_radius(f: &SpatialField) -> f64 {
    let g = f.grid;
    let phys = f.to_physical();
    let m = phys.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut r = 0.0f64;
    for (i, z) in phys.iter().enumerate() {
        if z.norm() > 1e-10 * m {
            let (a, b) = g.x(i);
            r = r.max(a.abs().max(b.abs()));
        }
    }
    r
}

fn effective_bandwidth(f: &SpatialField) -> f64 {
    let m = f.sup_norm();
    let mut k = 0.0f64;
    for (i, z) in f.values.iter().enumerate() {
        if z.norm() > 1e-10 * m {
            let (a, b) = f.grid.xi(i);
            k = k.max(a.abs().max(b.abs()));
        }
    }
    k
}

/// Ansatz fields `(u, n)` at time `t`, sampled on `grid`.
pub fn ansatz_eval(
    spec: &AnsatzSpec,
    t: f64,
    grid: FrequencyGrid,
) -> Result<(SpatialField, SpatialField)> {
    let s = spec.scale_at(t)?;
    let half = PI * grid.half_period;
    for f in [&spec.profile_p, &spec.profile_n] {
        if effective_radius(f) * s >= half {
            return Err(invalid("profile", "rescaled profile overflows the grid"));
        }
        if effective_bandwidth(f) / s > grid.nyquist() {
            return Err(invalid("profile", "rescaled profile is not resolved by the grid"));
        }
    }
    let n = grid.n;
    let xs: Vec<f64> = (0..n).map(|j| grid.x_1d(j)).collect();
    let ys: Vec<f64> = xs.iter().map(|x| x / s).collect();
    let p = fourier_resample(&spec.profile_p, &ys, &ys);
    let q = fourier_resample(&spec.profile_n, &ys, &ys);
    let tt = spec.t_blow - t;
    let mut up = vec![Complex64::new(0.0, 0.0); n * n];
    let mut np = vec![Complex64::new(0.0, 0.0); n * n];
    for a in 0..n {
        for b in 0..n {
            let r2 = xs[a] * xs[a] + xs[b] * xs[b];
            let phase = spec.theta + spec.omega * spec.omega / tt - r2 / (4.0 * tt);
            up[a * n + b] = Complex64::from_polar(1.0 / s, phase) * p[a * n + b];
            np[a * n + b] = Complex64::new(q[a * n + b].re / (s * s), 0.0);
        }
    }
    Ok((
        SpatialField::from_physical(grid, up),
        SpatialField::from_physical(grid, np),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupRow {
    pub t: f64,
    /// `||n||_{H^{-1/2}}`
    pub hm12_n: f64,
    /// `||dt n||_{H^{-3/2}}`
    pub hm32_dtn: f64,
    /// homogeneous `||n||_{\dot H^{-1/2}}`
    pub hdot_m12_n: f64,
    /// `||u||_{L^2}`
    pub l2_u: f64,
}

/// `xi . grad N_hat` on the profile lattice, via `-2 N_hat - F[x . grad N]`.
fn radial_derivative(nf: &SpatialField) -> SpatialField {
    let g = nf.grid;
    let gx = nf.multiplier(|a, _| Complex64::new(0.0, a)).to_physical();
    let gy = nf.multiplier(|_, b| Complex64::new(0.0, b)).to_physical();
    let xg: Vec<Complex64> = (0..g.len())
        .map(|i| {
            let (x, y) = g.x(i);
            gx[i] * x + gy[i] * y
        })
        .collect();
    let f = SpatialField::from_physical(g, xg);
    SpatialField {
        grid: g,
        values: nf
            .values
            .iter()
            .zip(&f.values)
            .map(|(a, b)| -a * 2.0 - b)
            .collect(),
    }
}

/// Norm trace of the ansatz. Each time is evaluated on the profile lattice
/// dilated by `1/s`, where `n_hat(xi_k / s) = N_hat(xi_k)` holds exactly.
pub fn blowup_norm_trace(spec: &AnsatzSpec, times: &[f64]) -> Result<Vec<BlowupRow>> {
    let pn = &spec.profile_n;
    let g = pn.grid;
    let d = radial_derivative(pn);
    let l2_p = spec.profile_p.l2_norm();
    let mut rows = Vec::with_capacity(times.len());
    for &t in times {
        let s = spec.scale_at(t)?;
        let dxi = g.dxi() / s;
        let (mut a, mut b) = (0.0, 0.0);
        for i in 0..g.len() {
            let k = g.abs_xi(i) / s;
            let w = japanese(k);
            a += pn.values[i].norm_sqr() / w;
            let dt = d.values[i] / (spec.omega * s);
            b += dt.norm_sqr() / (w * w * w);
        }
        let scaled = SpatialField {
            grid: FrequencyGrid {
                half_period: g.half_period * s,
                n: g.n,
            },
            values: pn.values.clone(),
        };
        rows.push(BlowupRow {
            t,
            hm12_n: (a * dxi * dxi).sqrt(),
            hm32_dtn: (b * dxi * dxi).sqrt(),
            hdot_m12_n: homogeneous_sobolev_norm(&scaled, -0.5),
            l2_u: l2_p,
        });
    }
    Ok(rows)
}

/// `c0 min{(1 + R^2)^{-1} r^{-2}, 1}`.
pub fn lifespan_bound(r_big: f64, r_small: f64, c0: f64) -> Result<f64> {
    if !(r_small > 0.0) {
        return Err(invalid("r", "must be positive"));
    }
    if r_small > r_big {
        return Err(invalid("r", format!("r = {r_small} exceeds R = {r_big}")));
    }
    if !(c0 > 0.0) {
        return Err(invalid("c0", "must be positive"));
    }
    Ok(c0 * (1.0 / ((1.0 + r_big * r_big) * r_small * r_small)).min(1.0))
}

/// Applies `u -> lambda u(lambda^2 t, lambda x)`, `n -> lambda^2 n(lambda^2 t, lambda x)`
/// to every snapshot. The result lives on the lattice dilated by `lambda` and solves
/// the system with wave speed `lambda` times the original; its reduced variable is
/// rebuilt with that speed's symbol.
pub fn rescale_solution(traj: &Trajectory, lambda: f64) -> Result<Trajectory> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(invalid("lambda", "must be positive"));
    }
    let mu = traj.config.wave_speed;
    let new_speed = lambda * mu;
    if new_speed < 1.0 {
        return Err(invalid("lambda", "rescaled wave speed would drop below 1"));
    }
    let old = traj.config.grid;
    let grid = FrequencyGrid::new(old.half_period / lambda, old.n)?;
    let mut config: SolverConfig = traj.config;
    config.grid = grid;
    config.dt = traj.config.dt / (lambda * lambda);
    config.wave_speed = new_speed;
    let snapshots: Vec<SolverState> = traj
        .snapshots
        .iter()
        .map(|s| {
            let (n, dtn) = reconstruct_speed(&s.v, mu);
            let u = SpatialField {
                grid,
                values: s.u.values.iter().map(|z| z / lambda).collect(),
            };
            let v = SpatialField {
                grid,
                values: (0..grid.len())
                    .map(|i| {
                        let w = wave_symbol(new_speed, grid.abs_xi(i));
                        n.values[i] + Complex64::i() * dtn.values[i] * (lambda * lambda) / w
                    })
                    .collect(),
            };
            SolverState {
                u,
                v,
                t: s.t / (lambda * lambda),
            }
        })
        .collect();
    let diagnostics = snapshots
        .iter()
        .map(|s| super::diagnostics(s, new_speed))
        .collect();
    Ok(Trajectory {
        config,
        snapshots,
        diagnostics,
    })
}

use super::{diagnostics, h1_norm, wave_symbol, Integrator, SolverConfig, SolverState, Trajectory};
use crate::error::{invalid, Result, ZlabError};
use crate::grid::{signed_index, Fft2, SpatialField};
use num_complex::Complex64;
use std::f64::consts::PI;

const BLOWUP_FACTOR: f64 = 1e6;

/// Precomputed symbols and transforms for one grid and wave speed.
struct Spectral {
    fft: Fft2,
    n: usize,
    k2: Vec<f64>,
    omega: Vec<f64>,
    mask: Vec<f64>,
    reflect: Vec<usize>,
    to_phys: f64,
    to_four: f64,
    lambda: f64,
}

impl Spectral {
    fn new(cfg: &SolverConfig) -> Self {
        let g = cfg.grid;
        let n = g.n;
        let cut = (n / 3) as i64;
        let mut k2 = Vec::with_capacity(g.len());
        let mut omega = Vec::with_capacity(g.len());
        let mut mask = Vec::with_capacity(g.len());
        for i in 0..g.len() {
            let r = g.abs_xi(i);
            k2.push(r * r);
            omega.push(wave_symbol(cfg.wave_speed, r));
            let (a, b) = (signed_index(i / n, n), signed_index(i % n, n));
            let keep = !cfg.dealias || (a.abs() <= cut && b.abs() <= cut);
            mask.push(if keep { 1.0 } else { 0.0 });
        }
        Spectral {
            fft: Fft2::new(n),
            n,
            k2,
            omega,
            mask,
            reflect: (0..g.len()).map(|i| g.reflect(i)).collect(),
            to_phys: g.dxi() * g.dxi() / (2.0 * PI),
            to_four: g.dx() * g.dx() / (2.0 * PI),
            lambda: cfg.wave_speed,
        }
    }

    fn physical(&self, f: &[Complex64]) -> Vec<Complex64> {
        let mut out = f.to_vec();
        self.fft.inverse(&mut out);
        for v in out.iter_mut() {
            *v *= self.to_phys;
        }
        out
    }

    fn fourier(&self, mut p: Vec<Complex64>) -> Vec<Complex64> {
        self.fft.forward(&mut p);
        for v in p.iter_mut() {
            *v *= self.to_four;
        }
        p
    }

    fn linear(&self, u: &mut [Complex64], v: &mut [Complex64], h: f64) {
        for i in 0..u.len() {
            u[i] *= Complex64::from_polar(1.0, -h * self.k2[i]);
            v[i] *= Complex64::from_polar(1.0, -h * self.omega[i]);
        }
    }

    fn real_part(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..v.len())
            .map(|i| (v[i] + v[self.reflect[i]].conj()) * 0.5)
            .collect()
    }

    /// Right-hand side `G` of `i dt v - omega v = G` without the linear part.
    fn wave_forcing(&self, u_phys: &[Complex64], re_v: &[Complex64]) -> Vec<Complex64> {
        let dens: Vec<Complex64> = u_phys.iter().map(|z| Complex64::new(z.norm_sqr(), 0.0)).collect();
        let dens_hat = self.fourier(dens);
        let l2 = self.lambda * self.lambda;
        (0..dens_hat.len())
            .map(|i| {
                let w = self.omega[i];
                (dens_hat[i] * (l2 * self.k2[i] / w) - re_v[i] / w) * self.mask[i]
            })
            .collect()
    }

    /// Exact flow of the coupling terms over time `h`: along it `|u|` and `Re v`
    /// are constant, so both updates are closed-form.
    fn coupling(&self, u: &mut Vec<Complex64>, v: &mut [Complex64], h: f64) {
        let re_v: Vec<Complex64> = self
            .real_part(v)
            .iter()
            .zip(&self.mask)
            .map(|(a, m)| a * m)
            .collect();
        let re_v_phys = self.physical(&re_v);
        let mut u_phys = self.physical(u);
        let g = self.wave_forcing(&u_phys, &re_v);
        for (z, n) in u_phys.iter_mut().zip(&re_v_phys) {
            *z *= Complex64::from_polar(1.0, -h * n.re);
        }
        let mut un = self.fourier(u_phys);
        for (a, m) in un.iter_mut().zip(&self.mask) {
            *a *= m;
        }
        *u = un;
        for (a, b) in v.iter_mut().zip(&g) {
            *a -= Complex64::i() * h * b;
        }
    }

    /// Nonlinear part of the vector field: `(-i Re(v) u, -i G)`.
    fn rhs(&self, u: &[Complex64], v: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let re_v: Vec<Complex64> = self
            .real_part(v)
            .iter()
            .zip(&self.mask)
            .map(|(a, m)| a * m)
            .collect();
        let re_v_phys = self.physical(&re_v);
        let u_phys = self.physical(u);
        let g = self.wave_forcing(&u_phys, &re_v);
        let prod: Vec<Complex64> = u_phys
            .iter()
            .zip(&re_v_phys)
            .map(|(z, n)| z * n.re * Complex64::new(0.0, -1.0))
            .collect();
        let mut du = self.fourier(prod);
        for (a, m) in du.iter_mut().zip(&self.mask) {
            *a *= m;
        }
        let dv = g.iter().map(|b| b * Complex64::new(0.0, -1.0)).collect();
        (du, dv)
    }

    fn rk4(&self, u: &mut Vec<Complex64>, v: &mut Vec<Complex64>, h: f64) {
        let len = u.len();
        let eu = |x: &[Complex64], s: f64| -> Vec<Complex64> {
            (0..len)
                .map(|i| x[i] * Complex64::from_polar(1.0, -s * self.k2[i]))
                .collect()
        };
        let ev = |x: &[Complex64], s: f64| -> Vec<Complex64> {
            (0..len)
                .map(|i| x[i] * Complex64::from_polar(1.0, -s * self.omega[i]))
                .collect()
        };
        let axpy = |x: &[Complex64], a: f64, y: &[Complex64]| -> Vec<Complex64> {
            x.iter().zip(y).map(|(p, q)| p + q * a).collect()
        };
        let (k1u, k1v) = self.rhs(u, v);
        let au = eu(&axpy(u, h / 2.0, &k1u), h / 2.0);
        let av = ev(&axpy(v, h / 2.0, &k1v), h / 2.0);
        let (k2u, k2v) = self.rhs(&au, &av);
        let uh = eu(u, h / 2.0);
        let vh = ev(v, h / 2.0);
        let bu = axpy(&uh, h / 2.0, &k2u);
        let bv = axpy(&vh, h / 2.0, &k2v);
        let (k3u, k3v) = self.rhs(&bu, &bv);
        let cu = axpy(&eu(u, h), h, &eu(&k3u, h / 2.0));
        let cv = axpy(&ev(v, h), h, &ev(&k3v, h / 2.0));
        let (k4u, k4v) = self.rhs(&cu, &cv);
        let e1u = eu(&k1u, h);
        let e1v = ev(&k1v, h);
        let s23u = eu(&axpy(&k2u, 1.0, &k3u), h / 2.0);
        let s23v = ev(&axpy(&k2v, 1.0, &k3v), h / 2.0);
        let base_u = eu(u, h);
        let base_v = ev(v, h);
        for i in 0..len {
            u[i] = base_u[i] + (e1u[i] + s23u[i] * 2.0 + k4u[i]) * (h / 6.0);
            v[i] = base_v[i] + (e1v[i] + s23v[i] * 2.0 + k4v[i]) * (h / 6.0);
        }
    }

    fn step(&self, cfg: &SolverConfig, u: &mut Vec<Complex64>, v: &mut Vec<Complex64>, h: f64) {
        if !cfg.nonlinear {
            self.linear(u, v, h);
            return;
        }
        match cfg.integrator {
            Integrator::StrangSplit => {
                self.linear(u, v, h / 2.0);
                self.coupling(u, v, h);
                self.linear(u, v, h / 2.0);
            }
            Integrator::InteractionRK4 => self.rk4(u, v, h),
        }
    }

    fn nls_step(&self, u: &mut Vec<Complex64>, h: f64, nonlinear: bool) {
        let half = |u: &mut [Complex64]| {
            for i in 0..u.len() {
                u[i] *= Complex64::from_polar(1.0, -h / 2.0 * self.k2[i]);
            }
        };
        if !nonlinear {
            for i in 0..u.len() {
                u[i] *= Complex64::from_polar(1.0, -h * self.k2[i]);
            }
            return;
        }
        half(u);
        let mut p = self.physical(u);
        for z in p.iter_mut() {
            *z *= Complex64::from_polar(1.0, h * z.norm_sqr());
        }
        let mut un = self.fourier(p);
        for (a, m) in un.iter_mut().zip(&self.mask) {
            *a *= m;
        }
        *u = un;
        half(u);
        let _ = self.n;
    }
}

fn step_count(t_end: f64, dt: f64) -> Result<(usize, f64)> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(invalid("T", "must be positive"));
    }
    let steps = ((t_end / dt) - 1e-9).ceil().max(1.0) as usize;
    Ok((steps, t_end / steps as f64))
}

fn run(
    cfg: &SolverConfig,
    u0: &SpatialField,
    v0: &SpatialField,
    t_end: f64,
    nls: bool,
) -> Result<Trajectory> {
    cfg.validate()?;
    crate::grid::check_same(&cfg.grid, &u0.grid)?;
    crate::grid::check_same(&cfg.grid, &v0.grid)?;
    let (steps, h) = step_count(t_end, cfg.dt)?;
    let sp = Spectral::new(cfg);
    let mut u = u0.values.clone();
    let mut v = v0.values.clone();
    let h1_0 = h1_norm(u0);
    let mut snapshots = vec![SolverState {
        u: u0.clone(),
        v: v0.clone(),
        t: 0.0,
    }];
    for s in 1..=steps {
        if nls {
            sp.nls_step(&mut u, h, cfg.nonlinear);
        } else {
            sp.step(cfg, &mut u, &mut v, h);
        }
        let t = s as f64 * h;
        if s % cfg.snapshot_every == 0 || s == steps {
            let state = SolverState {
                u: SpatialField { grid: cfg.grid, values: u.clone() },
                v: SpatialField { grid: cfg.grid, values: v.clone() },
                t,
            };
            let h1 = h1_norm(&state.u);
            if !h1.is_finite() || (h1_0 > 0.0 && h1 > BLOWUP_FACTOR * h1_0) {
                return Err(ZlabError::BlowUp {
                    t,
                    h1,
                    h1_initial: h1_0,
                    factor: BLOWUP_FACTOR,
                });
            }
            snapshots.push(state);
        }
    }
    let diagnostics = snapshots.iter().map(|s| diagnostics(s, cfg.wave_speed)).collect();
    Ok(Trajectory {
        config: *cfg,
        snapshots,
        diagnostics,
    })
}

/// Advances the reduced system `i u_t + Delta u = Re(v) u`,
/// `i v_t - <nabla> v = -Delta/<nabla> |u|^2 - <nabla>^{-1} Re v` to time `T`.
pub fn solve_reduced(
    cfg: &SolverConfig,
    u0: &SpatialField,
    v0: &SpatialField,
    t_end: f64,
) -> Result<Trajectory> {
    let mut c = *cfg;
    c.wave_speed = 1.0;
    run(&c, u0, v0, t_end, false)
}

/// Reduced system at wave speed `lambda = cfg.wave_speed`, from `(u0, n0, n1)`.
pub fn solve_speed(
    cfg: &SolverConfig,
    u0: &SpatialField,
    n0: &SpatialField,
    n1: &SpatialField,
    t_end: f64,
) -> Result<Trajectory> {
    let (u, v) = super::reduce_data_speed(u0, n0, n1, cfg.wave_speed)?;
    run(cfg, &u, &v, t_end, false)
}

/// Focusing cubic NLS `i u_t + Delta u + |u|^2 u = 0` by Strang splitting.
pub fn solve_nls(cfg: &SolverConfig, u0: &SpatialField, t_end: f64) -> Result<Trajectory> {
    let zero = SpatialField::zeros(cfg.grid);
    run(cfg, u0, &zero, t_end, true)
}

/// One integrator step of size `h` (negative `h` runs backwards).
pub fn step_reduced(cfg: &SolverConfig, state: &SolverState, h: f64) -> SolverState {
    let sp = Spectral::new(cfg);
    let mut u = state.u.values.clone();
    let mut v = state.v.values.clone();
    sp.step(cfg, &mut u, &mut v, h);
    SolverState {
        u: SpatialField { grid: cfg.grid, values: u },
        v: SpatialField { grid: cfg.grid, values: v },
        t: state.t + h,
    }
}

/// Runs `steps` steps of size `h` in place (used for reversibility checks).
pub fn evolve_steps(cfg: &SolverConfig, state: &SolverState, h: f64, steps: usize) -> SolverState {
    let sp = Spectral::new(cfg);
    let mut u = state.u.values.clone();
    let mut v = state.v.values.clone();
    for _ in 0..steps {
        sp.step(cfg, &mut u, &mut v, h);
    }
    SolverState {
        u: SpatialField { grid: cfg.grid, values: u },
        v: SpatialField { grid: cfg.grid, values: v },
        t: state.t + h * steps as f64,
    }
}

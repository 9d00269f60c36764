//! One function per command. Each returns its tables, checks and constants;
//! writing them out is left to the caller.

use crate::config::{ExperimentConfig, Params};
use crate::output::{Cell, Check, Series, Table};
use crate::params::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::str::FromStr;
use zlab_core::cutoff::{beta_angular, psi_n};
use zlab_core::norms::{bourgain_norm, NormSpec, SumExponent};
use zlab_core::solver::{
    blowup_norm_trace, ground_state, lifespan_bound, reduce_data, solve_nls, solve_reduced, solve_speed,
    AnsatzSpec, Diagnostics, Integrator, SolverConfig, Trajectory,
};
use zlab_core::trilinear::{
    check_bilinear_strichartz, check_regime, check_trilinear_full, counterexample_sweep, duhamel_lower_bound_1,
    duhamel_lower_bound_2, fit_exponent, localize_map, multiband_field, stability_factor, BilinearCase,
    Counterexample, ExponentCase, LatticeSpec, Regime, RegimeConstants, Sign, SweepOptions, SweepResult,
    TileSpec, MULTIPLICITY,
};
use zlab_core::{Complex64, DyadicScale, Flavor, FrequencyGrid, SpaceTimeGrid, SpatialField, ZlabError};

/// Mass of the positive ground state `Q` of `-Q + Delta Q + Q^3 = 0` in the plane.
pub const TOWNES_MASS: f64 = 11.7008965;

/// What a command produced.
#[derive(Debug, Default)]
pub struct Outcome {
    /// `(suffix, table)`; the main table has an empty suffix.
    pub tables: Vec<(String, Table)>,
    pub checks: Vec<Check>,
    pub constants: BTreeMap<String, f64>,
    pub seed_list: Vec<u64>,
    pub plot: Option<Series>,
    /// `(file extension, bytes)` of binary artifacts.
    pub blobs: Vec<(String, Vec<u8>)>,
}

impl Outcome {
    fn main_table(&mut self, t: Table) {
        self.tables.push((String::new(), t));
    }

    fn constant(&mut self, name: &str, v: f64) {
        self.constants.insert(name.to_string(), v);
    }
}

type Res = std::result::Result<Outcome, ZlabError>;

pub fn execute(cfg: &ExperimentConfig) -> Res {
    let seed = cfg.seed;
    match &cfg.parameters {
        Params::PsiCheck(p) => psi_check(p, seed),
        Params::Norm(p) => norm(p, seed),
        Params::EstimateSweep(p) => estimate_sweep(p, seed),
        Params::TrilinearSweep(p) => trilinear_sweep(p, seed),
        Params::Counterexample(p) => counterexample(p),
        Params::DuhamelLb(p) => duhamel_lb(p),
        Params::LocalizeCheck(p) => localize_check(p),
        Params::Solve(p) => solve(p),
        Params::Nls(p) => nls(p),
        Params::Subsonic(p) => subsonic(p),
        Params::GroundState(p) => ground_state_cmd(p),
        Params::BlowupTrace(p) => blowup_trace(p),
        Params::Lifespan(p) => lifespan(p),
    }
}

fn scale(name: &'static str, v: u64) -> Result<DyadicScale, ZlabError> {
    DyadicScale::from_value(v).map_err(|_| ZlabError::InvalidParameter {
        name,
        reason: format!("{v} is not a power of two"),
    })
}

fn scales(name: &'static str, v: &[u64]) -> Result<Vec<DyadicScale>, ZlabError> {
    v.iter().map(|&x| scale(name, x)).collect()
}

fn dyadic_range(lo: u64, hi: u64) -> Result<Vec<DyadicScale>, ZlabError> {
    let (a, b) = (scale("nMin", lo)?, scale("nMax", hi)?);
    if a.exponent() >= b.exponent() {
        return Err(ZlabError::InvalidParameter {
            name: "nMax",
            reason: format!("needs nMin < nMax, got {lo}..{hi}"),
        });
    }
    Ok((a.exponent()..=b.exponent()).map(DyadicScale::from_exponent).collect())
}

fn seed_list(base: u64, count: usize) -> Vec<u64> {
    (0..count as u64).map(|i| base.wrapping_add(i)).collect()
}

fn loglog(title: &str, x: &str, y: &str, points: Vec<(f64, f64)>) -> Series {
    Series {
        title: title.into(),
        x_label: x.into(),
        y_label: y.into(),
        log_x: true,
        log_y: true,
        points,
    }
}

fn psi_check(p: &PsiCheckParams, seed: u64) -> Res {
    let mut out = Outcome::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = 2f64.powi(p.max_exponent as i32);
    let mut worst = 0.0f64;
    for i in 0..p.samples {
        // Alternate uniform and log-uniform radii so every band gets samples.
        let r = if i % 2 == 0 {
            rng.random_range(0.0..top)
        } else {
            2f64.powf(rng.random_range(-4.0..p.max_exponent as f64))
        };
        let s: f64 = (0..=p.max_exponent).map(|k| psi_n(DyadicScale::from_exponent(k), r)).sum();
        worst = worst.max((s - 1.0).abs());
    }
    let mut t = Table::new(&["partition", "size", "samples", "max_deviation"]);
    t.push(vec!["dyadic".into(), (p.max_exponent as u64).into(), p.samples.into(), worst.into()]);
    out.checks.push(Check::at_most("dyadic_max_deviation", worst, p.tolerance));
    for &a in &p.angular {
        let sa = scale("angular", a)?;
        let mut dev = 0.0f64;
        for _ in 0..p.angular_samples {
            let th = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * rng.random::<f64>();
            let mut s = 0.0;
            for j in 0..a as i64 {
                s += beta_angular(sa, j, th)?;
            }
            dev = dev.max((s - 1.0).abs());
        }
        t.push(vec!["angular".into(), a.into(), p.angular_samples.into(), dev.into()]);
        out.checks.push(Check::at_most(format!("angular_{a}_max_deviation"), dev, p.tolerance));
    }
    out.main_table(t);
    Ok(out)
}

fn norm(p: &NormParams, seed: u64) -> Res {
    let flavor = Flavor::from_str(&p.flavor)?;
    let grid = SpaceTimeGrid::new(FrequencyGrid::new(p.half_period, p.n)?, p.time_window, p.n_t)?;
    let w = multiband_field(grid, flavor, &scales("bands", &p.bands)?, &scales("modulations", &p.modulations)?, seed);
    let mut out = Outcome::default();
    out.seed_list = vec![seed];
    let mut t = Table::new(&["p", "norm"]);
    let mut vals = Vec::new();
    for (name, e) in [("1", SumExponent::One), ("2", SumExponent::Two), ("inf", SumExponent::Inf)] {
        let v = bourgain_norm(&w, &NormSpec::new(flavor, p.sigma, p.b, e));
        t.push(vec![name.into(), v.into()]);
        out.constant(&format!("norm_p{name}"), v);
        vals.push(v);
    }
    let nesting = (vals[2] / vals[1]).max(vals[1] / vals[0]);
    out.checks.push(Check::at_most("p_nesting_ratio", nesting, 1.0 + 1e-12));
    let doubled = w.scale(Complex64::new(0.0, 2.0));
    let v2 = bourgain_norm(&doubled, &NormSpec::new(flavor, p.sigma, p.b, SumExponent::Two));
    let homog = (v2 - 2.0 * vals[1]).abs() / (2.0 * vals[1]);
    out.checks.push(Check::at_most("homogeneity_error", homog, 1e-12));
    out.main_table(t);
    Ok(out)
}

enum Estimate {
    Regime(Regime),
    Bilinear(BilinearCase),
}

fn estimate_sweep(p: &EstimateParams, seed: u64) -> Res {
    let name = p.estimate.as_deref().unwrap_or_default();
    let est = match (Regime::from_str(name), BilinearCase::from_str(name)) {
        (Ok(r), _) => Estimate::Regime(r),
        (_, Ok(b)) => Estimate::Bilinear(b),
        _ => {
            return Err(ZlabError::InvalidParameter {
                name: "estimate",
                reason: format!("unknown estimate `{name}`"),
            })
        }
    };
    let spec = TileSpec {
        n: scale("n", p.n)?,
        n1: scale("n1", p.n1)?,
        n2: scale("n2", p.n2)?,
        l: scale("l", p.l)?,
        l1: scale("l1", p.l1)?,
        l2: scale("l2", p.l2)?,
        a: p.a.map(|a| scale("a", a)).transpose()?,
        j1: p.j1,
        j2: p.j2,
        sign: Sign::from_str(&p.sign)?,
        cube_side: p.cube_side,
    };
    let seeds = seed_list(seed, p.seeds);
    let consts = RegimeConstants::default();
    let run = |opts: SweepOptions| -> Result<SweepResult, ZlabError> {
        match est {
            Estimate::Regime(r) => check_regime(&spec, r, &seeds, &consts, opts),
            Estimate::Bilinear(b) => check_bilinear_strichartz(&spec, b, &seeds, opts),
        }
    };
    let opts = SweepOptions::new(p.dxi);
    let coarse = run(opts)?;
    let fine = if p.refine { Some(run(opts.refined())?) } else { None };
    finish_sweep(coarse, fine, seeds, p.stability_tolerance)
}

fn finish_sweep(coarse: SweepResult, fine: Option<SweepResult>, seeds: Vec<u64>, stab_tol: f64) -> Res {
    let mut out = Outcome::default();
    for (k, v) in &coarse.parameters {
        out.constant(k, *v);
    }
    out.constant("max_ratio", coarse.max_ratio);
    out.checks.push(Check::at_most("max_ratio_finite", coarse.max_ratio, f64::MAX));
    let mut t = match &fine {
        Some(_) => Table::new(&["seed", "ratio", "ratio_refined"]),
        None => Table::new(&["seed", "ratio"]),
    };
    for (i, &s) in seeds.iter().enumerate() {
        let mut row: Vec<Cell> = vec![s.into(), coarse.measured[i].1.into()];
        if let Some(f) = &fine {
            row.push(f.measured[i].1.into());
        }
        t.push(row);
    }
    if let Some(f) = &fine {
        let sf = stability_factor(coarse.max_ratio, f.max_ratio);
        out.constant("max_ratio_refined", f.max_ratio);
        out.constant("stability_factor", sf);
        out.checks.push(Check::at_most("stability_factor", sf, stab_tol));
    }
    out.seed_list = seeds;
    out.main_table(t);
    Ok(out)
}

fn trilinear_sweep(p: &TrilinearParams, seed: u64) -> Res {
    let seeds = seed_list(seed, p.seeds);
    let desk = LatticeSpec::desk();
    let coarse = check_trilinear_full(&seeds, desk, p.conjugate)?;
    let fine = if p.refine {
        Some(check_trilinear_full(&seeds, desk.refined(), p.conjugate)?)
    } else {
        None
    };
    finish_sweep(coarse, fine, seeds, p.stability_tolerance)
}

fn slope_checks(out: &mut Outcome, slope: f64, predicted: f64, tol: f64) {
    out.constant("fitted_slope", slope);
    out.constant("predicted_slope", predicted);
    out.checks.push(Check::at_most("slope_deviation", (slope - predicted).abs(), tol));
    out.checks.push(Check::at_least("slope_lower_bound", slope, predicted - tol));
}

fn counterexample(p: &CounterexampleParams) -> Res {
    let which = Counterexample::from_str(p.lemma.as_deref().unwrap_or_default())?;
    let case = ExponentCase {
        sigma: p.sigma,
        k: p.k,
        ell: p.ell,
        b_out: p.b_out,
        b1: p.b1,
        b2: p.b2,
    };
    let r = counterexample_sweep(which, &case, &dyadic_range(p.n_min, p.n_max)?)?;
    let mut out = Outcome::default();
    let mut t = Table::new(&["N", "ratio"]);
    for &(n, v) in &r.measured {
        t.push(vec![(n as u64).into(), v.into()]);
    }
    slope_checks(&mut out, r.fitted_slope.unwrap_or(f64::NAN), case.predicted(which), p.tolerance);
    out.constant("fit_residual", r.fit_residual.unwrap_or(f64::NAN));
    out.plot = Some(loglog(&format!("counterexample {which}"), "N", "ratio", r.measured.clone()));
    out.main_table(t);
    Ok(out)
}

fn duhamel_lb(p: &DuhamelParams) -> Res {
    let predicted = match p.bound {
        1 => -p.ell - 0.5,
        2 => p.ell - 2.0 * p.k + 0.5,
        _ => {
            return Err(ZlabError::InvalidParameter {
                name: "bound",
                reason: format!("expected 1 or 2, got {}", p.bound),
            })
        }
    };
    let mut out = Outcome::default();
    let mut t = Table::new(&["N", "raw", "normalized"]);
    let mut pts = Vec::new();
    for n in dyadic_range(p.n_min, p.n_max)? {
        let lb = if p.bound == 1 {
            duhamel_lower_bound_1(n, p.horizon, p.k, p.ell, p.t)?
        } else {
            duhamel_lower_bound_2(n, p.horizon, p.k, p.ell, p.t)?
        };
        t.push(vec![n.value().into(), lb.raw.into(), lb.normalized.into()]);
        pts.push((n.value_f64(), lb.raw));
    }
    let fit = fit_exponent(&pts)?;
    slope_checks(&mut out, fit.slope, predicted, p.tolerance);
    out.plot = Some(loglog(&format!("Duhamel lower bound {}", p.bound), "N", "ratio", pts));
    out.main_table(t);
    Ok(out)
}

fn localize_check(p: &LocalizeParams) -> Res {
    let r = localize_map(scale("n1", p.n1)?, scale("a", p.a)?, p.k_offset, p.mesh)?;
    let mut out = Outcome::default();
    let mut t = Table::new(&["j", "k_of_j"]);
    for &(j, k) in &r.mapping {
        t.push(vec![j.into(), k.into()]);
    }
    out.constant("pairs_checked", r.pairs_checked as f64);
    out.constant("max_offset", r.max_offset);
    out.checks.push(Check::at_most("containment_violations", r.containment_violations as f64, 0.0));
    out.checks.push(Check::at_most("max_multiplicity", r.max_multiplicity as f64, MULTIPLICITY as f64));
    out.main_table(t);
    Ok(out)
}

fn grid_of(half_period: f64, n: usize) -> Result<FrequencyGrid, ZlabError> {
    FrequencyGrid::new(half_period, n)
}

fn gaussian_packet(grid: FrequencyGrid, amp: f64, width: f64, momentum: f64) -> SpatialField {
    SpatialField::from_physical_fn(grid, |x, y| {
        Complex64::from_polar(amp * (-(x * x + y * y) / (2.0 * width * width)).exp(), momentum * x)
    })
}

fn diagnostics_table(d: &[Diagnostics], with_wave: bool) -> Table {
    let mut t = if with_wave {
        Table::new(&["t", "mass", "Hm12_n", "Hm32_dtn"])
    } else {
        Table::new(&["t", "mass"])
    };
    for r in d {
        let mut row: Vec<Cell> = vec![r.t.into(), r.mass.into()];
        if with_wave {
            row.push(r.hm12_n.into());
            row.push(r.hm32_dtn.into());
        }
        t.push(row);
    }
    t
}

fn mass_drift(d: &[Diagnostics]) -> f64 {
    let m0 = d[0].mass;
    d.iter().map(|r| (r.mass - m0).abs() / m0).fold(0.0, f64::max)
}

/// Little-endian container: magic `ZLABSNAP`, u32 version 1, u64 n, f64 half-period,
/// u64 snapshot count, then per snapshot f64 t followed by the n*n coefficients of
/// `u` and of `v` as (re, im) f64 pairs in storage order.
pub fn snapshot_container(tr: &Trajectory) -> Vec<u8> {
    let g = tr.config.grid;
    let mut b = Vec::with_capacity(32 + tr.snapshots.len() * (8 + 32 * g.len()));
    b.extend_from_slice(b"ZLABSNAP");
    b.extend_from_slice(&1u32.to_le_bytes());
    b.extend_from_slice(&(g.n as u64).to_le_bytes());
    b.extend_from_slice(&g.half_period.to_le_bytes());
    b.extend_from_slice(&(tr.snapshots.len() as u64).to_le_bytes());
    for s in &tr.snapshots {
        b.extend_from_slice(&s.t.to_le_bytes());
        for z in s.u.values.iter().chain(&s.v.values) {
            b.extend_from_slice(&z.re.to_le_bytes());
            b.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    b
}

fn mass_plot(d: &[Diagnostics]) -> Series {
    Series {
        title: "mass".into(),
        x_label: "t".into(),
        y_label: "mass".into(),
        log_x: false,
        log_y: false,
        points: d.iter().map(|r| (r.t, r.mass)).collect(),
    }
}

fn solve(p: &SolveParams) -> Res {
    let grid = grid_of(p.half_period, p.n)?;
    let integrator = match p.integrator.as_str() {
        "strang" => Integrator::StrangSplit,
        "rk4" => Integrator::InteractionRK4,
        other => {
            return Err(ZlabError::InvalidParameter {
                name: "integrator",
                reason: format!("expected strang or rk4, got `{other}`"),
            })
        }
    };
    let cfg = SolverConfig {
        wave_speed: p.wave_speed,
        dealias: p.dealias,
        integrator,
        snapshot_every: p.snapshot_every,
        nonlinear: p.nonlinear,
        ..SolverConfig::new(grid, p.dt)
    };
    let u0 = gaussian_packet(grid, p.u_amplitude, p.u_width, p.momentum);
    let n0 = gaussian_packet(grid, p.n_amplitude, p.n_width, 0.0);
    let n1 = SpatialField::zeros(grid);
    let tr = if p.wave_speed == 1.0 {
        let (u, v) = reduce_data(&u0, &n0, &n1)?;
        solve_reduced(&cfg, &u, &v, p.t_end)?
    } else {
        solve_speed(&cfg, &u0, &n0, &n1, p.t_end)?
    };
    let mut out = Outcome::default();
    let drift = mass_drift(&tr.diagnostics);
    out.constant("final_time", tr.last().t);
    out.constant("initial_mass", tr.diagnostics[0].mass);
    out.checks.push(Check::at_most("mass_relative_drift", drift, p.mass_tolerance));
    out.plot = Some(mass_plot(&tr.diagnostics));
    out.main_table(diagnostics_table(&tr.diagnostics, true));
    if p.write_snapshots {
        out.blobs.push(("snapshots.bin".into(), snapshot_container(&tr)));
    }
    Ok(out)
}

fn nls(p: &NlsParams) -> Res {
    let grid = grid_of(p.half_period, p.n)?;
    let cfg = SolverConfig {
        dealias: p.dealias,
        snapshot_every: p.snapshot_every,
        ..SolverConfig::new(grid, p.dt)
    };
    let u0 = gaussian_packet(grid, p.u_amplitude, p.u_width, p.momentum);
    let tr = solve_nls(&cfg, &u0, p.t_end)?;
    let mut out = Outcome::default();
    let drift = mass_drift(&tr.diagnostics);
    out.constant("final_time", tr.last().t);
    out.constant("initial_mass", tr.diagnostics[0].mass);
    out.checks.push(Check::at_most("mass_relative_drift", drift, p.mass_tolerance));
    out.plot = Some(mass_plot(&tr.diagnostics));
    out.main_table(diagnostics_table(&tr.diagnostics, false));
    if p.write_snapshots {
        out.blobs.push(("snapshots.bin".into(), snapshot_container(&tr)));
    }
    Ok(out)
}

fn subsonic(p: &SubsonicParams) -> Res {
    if p.speeds.is_empty() {
        return Err(ZlabError::Empty("speeds"));
    }
    let grid = grid_of(p.half_period, p.n)?;
    let cfg = SolverConfig::new(grid, p.dt);
    let u0 = gaussian_packet(grid, p.u_amplitude, p.u_width, 0.0);
    let dens = SpatialField::from_physical_fn(grid, |x, y| {
        let a = p.u_amplitude * (-(x * x + y * y) / (2.0 * p.u_width * p.u_width)).exp();
        Complex64::new(-a * a, 0.0)
    });
    let zero = SpatialField::zeros(grid);
    let target = solve_nls(&cfg, &u0, p.t_end)?;
    let mut out = Outcome::default();
    let mut t = Table::new(&["lambda", "l2_error"]);
    let mut errs = Vec::new();
    for &l in &p.speeds {
        let tr = solve_speed(&SolverConfig { wave_speed: l, ..cfg }, &u0, &dens, &zero, p.t_end)?;
        let e = tr.last().u.sub(&target.last().u)?.l2_norm();
        t.push(vec![l.into(), e.into()]);
        errs.push((l, e));
    }
    let decreasing = errs.windows(2).all(|w| w[1].1 < w[0].1);
    out.checks.push(Check::holds("error_strictly_decreasing", decreasing));
    if errs.len() >= 2 {
        out.constant("error_slope", fit_exponent(&errs)?.slope);
    }
    out.plot = Some(loglog("subsonic limit", "lambda", "L2 error", errs));
    out.main_table(t);
    Ok(out)
}

fn radial_profile(q: &SpatialField) -> Table {
    let g = q.grid;
    let phys = q.to_physical();
    let mut t = Table::new(&["r", "q"]);
    for a in 0..g.n / 2 {
        t.push(vec![g.x_1d(a).into(), phys[a * g.n].re.into()]);
    }
    t
}

fn ground_state_cmd(p: &GroundStateParams) -> Res {
    let gs = ground_state(grid_of(p.half_period, p.n)?, p.tol)?;
    let mut out = Outcome::default();
    let q0 = gs.q.to_physical()[0].re;
    out.constant("iterations", gs.iterations as f64);
    out.constant("fixed_point_residual", gs.residual);
    out.constant("mass", gs.mass);
    out.constant("reference_mass", TOWNES_MASS);
    out.constant("q_at_origin", q0);
    out.checks.push(Check::at_most("pde_residual", gs.pde_residual, p.residual_tolerance));
    out.checks.push(Check::at_most(
        "mass_relative_error",
        (gs.mass - TOWNES_MASS).abs() / TOWNES_MASS,
        p.mass_tolerance,
    ));
    out.main_table(radial_profile(&gs.q));
    Ok(out)
}

fn blowup_trace(p: &BlowupParams) -> Res {
    if p.points < 2 {
        return Err(ZlabError::InvalidParameter {
            name: "points",
            reason: "need at least two times".into(),
        });
    }
    if !(p.gap_min > 0.0 && p.gap_max > p.gap_min) {
        return Err(ZlabError::InvalidParameter {
            name: "gapMin",
            reason: "need 0 < gapMin < gapMax".into(),
        });
    }
    let grid = grid_of(p.half_period, p.n)?;
    let (pp, pn) = match p.profile.as_str() {
        "townes" => {
            let q = ground_state(grid, 1e-10)?.q;
            let q2: Vec<Complex64> = q.to_physical().iter().map(|z| Complex64::new(-z.re * z.re, 0.0)).collect();
            (q.clone(), SpatialField::from_physical(grid, q2))
        }
        "gaussian" => (
            gaussian_packet(grid, 1.0, std::f64::consts::FRAC_1_SQRT_2, 0.0),
            gaussian_packet(grid, -1.0, 0.5, 0.0),
        ),
        other => {
            return Err(ZlabError::InvalidParameter {
                name: "profile",
                reason: format!("expected townes or gaussian, got `{other}`"),
            })
        }
    };
    let spec = AnsatzSpec {
        omega: p.omega,
        theta: p.theta,
        t_blow: p.t_blow,
        profile_p: pp,
        profile_n: pn,
    };
    spec.validate()?;
    let (lo, hi) = (p.gap_min.ln(), p.gap_max.ln());
    let times: Vec<f64> = (0..p.points)
        .map(|k| p.t_blow - p.omega * (hi + (lo - hi) * k as f64 / (p.points - 1) as f64).exp())
        .collect();
    let rows = blowup_norm_trace(&spec, &times)?;
    let mut out = Outcome::default();
    let mut t = Table::new(&["t", "T_minus_t", "Hm12_n", "Hm32_dtn", "Hdot_m12_n", "L2_u"]);
    let mut pts = Vec::new();
    for r in &rows {
        let gap = p.t_blow - r.t;
        t.push(vec![r.t.into(), gap.into(), r.hm12_n.into(), r.hm32_dtn.into(), r.hdot_m12_n.into(), r.l2_u.into()]);
        pts.push((gap, r.hdot_m12_n));
    }
    let slope = fit_exponent(&pts)?.slope;
    let l2 = rows[0].l2_u;
    let l2_drift = rows.iter().map(|r| (r.l2_u - l2).abs() / l2).fold(0.0, f64::max);
    out.constant("fitted_slope", slope);
    out.constant("predicted_slope", -0.5);
    out.checks.push(Check::at_most("slope_deviation", (slope + 0.5).abs(), p.slope_tolerance));
    out.checks.push(Check::at_most("l2_relative_drift", l2_drift, p.l2_tolerance));
    out.plot = Some(loglog("blow-up trace", "T - t", "Hdot^{-1/2} norm of n", pts));
    out.main_table(t);
    Ok(out)
}

fn lifespan(p: &LifespanParams) -> Res {
    if p.radii.is_empty() {
        return Err(ZlabError::Empty("radii"));
    }
    let mut out = Outcome::default();
    let mut t = Table::new(&["R", "lifespan"]);
    let mut pts = Vec::new();
    for &r_big in &p.radii {
        let v = lifespan_bound(r_big, p.r, p.c0)?;
        t.push(vec![r_big.into(), v.into()]);
        pts.push((r_big, v));
    }
    if pts.len() >= 2 {
        let slope = fit_exponent(&pts)?.slope;
        out.constant("fitted_slope", slope);
        out.checks.push(Check::at_most("slope_deviation", (slope + 2.0).abs(), p.slope_tolerance));
    }
    out.plot = Some(loglog("lifespan bound", "R", "T", pts));
    out.main_table(t);
    Ok(out)
}

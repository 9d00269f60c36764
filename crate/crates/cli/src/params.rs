//! Parameter blocks of every command. Keys are camelCase in JSON and
//! kebab-case on the command line.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "camelCase")]
pub struct PsiCheckParams {
    pub samples: usize,
    pub max_exponent: u32,
    pub angular: Vec<u64>,
    pub angular_samples: usize,
    pub tolerance: f64,
}

impl Default for PsiCheckParams {
    fn default() -> Self {
        PsiCheckParams {
            samples: 100_000,
            max_exponent: 20,
            angular: vec![4, 16, 64],
            angular_samples: 10_000,
            tolerance: 1e-12,
        }
    }
}

/// Random multiband field on a space-time lattice, measured in every `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "camelCase")]
pub struct NormParams {
    pub flavor: String,
    pub sigma: f64,
    pub b: f64,
    pub bands: Vec<u64>,
    pub modulations: Vec<u64>,
    pub half_period: f64,
    pub n: usize,
    pub time_window: f64,
    pub n_t: usize,
}

impl Default for NormParams {
    fn default() -> Self {
        NormParams {
            flavor: "S".into(),
            sigma: 0.0,
            b: 5.0 / 12.0,
            bands: vec![1, 2],
            modulations: vec![1, 2, 4, 8],
            half_period: 2.0,
            n: 32,
            time_window: std::f64::consts::PI,
            n_t: 32,
        }
    }
}

/// One regime (`trans-low-mod`, ...) or bilinear case (`sch-sch`, ...) at one tile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "camelCase")]
pub struct EstimateParams {
    pub estimate: Option<String>,
    pub n: u64,
    pub n1: u64,
    pub n2: u64,
    pub l: u64,
    pub l1: u64,
    pub l2: u64,
    pub a: Option<u64>,
    pub j1: Option<u64>,
    pub j2: Option<u64>,
    pub sign: String,
    pub cube_side: Option<f64>,
    pub seeds: usize,
    pub dxi: f64,
    pub refine: bool,
    pub stability_tolerance: f64,
}

impl Default for EstimateParams {
    fn default() -> Self {
        EstimateParams {
            estimate: None,
            n: 1,
            n1: 1,
            n2: 1,
            l: 1,
            l1: 1,
            l2: 1,
            a: None,
            j1: None,
            j2: None,
            sign: "+".into(),
            cube_side: None,
            seeds: 25,
            dxi: 1.0,
            refine: true,
            stability_tolerance: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "camelCase")]
pub struct TrilinearParams {
    pub seeds: usize,
    pub conjugate: bool,
    pub refine: bool,
    pub stability_tolerance: f64,
}

impl Default for TrilinearParams {
    fn default() -> Self {
        TrilinearParams {
            seeds: 10,
            conjugate: false,
            refine: true,
            stability_tolerance: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "camelCase")]
pub struct CounterexampleParams {
    pub lemma: Option<String>,
    pub sigma: f64,
    pub k: f64,
    pub ell: f64,
    pub b_out: f64,
    pub b1: f64,
    pub b2: f64,
    pub n_min: u64,
    pub n_max: u64,
    pub tolerance: f64,
}

impl Default for CounterexampleParams {
    fn default() -> Self {
        let b = 5.0 / 12.0;
        CounterexampleParams {
            lemma: None,
            sigma: -1.0,
            k: 0.0,
            ell: -0.5,
            b_out: b,
            b1: b,
            b2: b,
            n_min: 16,
            n_max: 256,
            tolerance: 0.15,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "camelCase")]
pub struct DuhamelParams {
    /// 1: Schrodinger output from a wave source, 2: wave output from two Schrodinger sources.
    pub bound: u8,
    pub k: f64,
    pub ell: f64,
    pub horizon: f64,
    pub t: f64,
    pub n_min: u64,
    pub n_max: u64,
    pub tolerance: f64,
}

impl Default for DuhamelParams {
    fn default() -> Self {
        DuhamelParams {
            bound: 1,
            k: 0.0,
            ell: -0.5,
            horizon: 1.0,
            t: 0.5,
            n_min: 32,
            n_max: 512,
            tolerance: 0.15,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "camelCase")]
pub struct LocalizeParams {
    pub n1: u64,
    pub a: u64,
    pub k_offset: f64,
    pub mesh: f64,
}

impl Default for LocalizeParams {
    fn default() -> Self {
        LocalizeParams {
            n1: 64,
            a: 8,
            k_offset: 0.0,
            mesh: 1e-3,
        }
    }
}

/// Gaussian initial data `u0 = A e^{-|x|^2 / (2 w^2)} e^{i p x_1}`, `n0 = B e^{-|x|^2 / (2 v^2)}`, `n1 = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "camelCase")]
pub struct SolveParams {
    pub half_period: f64,
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    pub wave_speed: f64,
    pub integrator: String,
    pub dealias: bool,
    pub nonlinear: bool,
    pub snapshot_every: usize,
    pub u_amplitude: f64,
    pub u_width: f64,
    pub momentum: f64,
    pub n_amplitude: f64,
    pub n_width: f64,
    pub mass_tolerance: f64,
    pub write_snapshots: bool,
}

impl Default for SolveParams {
    fn default() -> Self {
        SolveParams {
            half_period: 16.0,
            n: 256,
            dt: 1e-4,
            t_end: 0.1,
            wave_speed: 1.0,
            integrator: "strang".into(),
            dealias: true,
            nonlinear: true,
            snapshot_every: 100,
            u_amplitude: 1.0,
            u_width: std::f64::consts::SQRT_2,
            momentum: 0.5,
            n_amplitude: 0.5,
            n_width: 1.0,
            mass_tolerance: 1e-6,
            write_snapshots: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "camelCase")]
pub struct NlsParams {
    pub half_period: f64,
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    pub dealias: bool,
    pub snapshot_every: usize,
    pub u_amplitude: f64,
    pub u_width: f64,
    pub momentum: f64,
    pub mass_tolerance: f64,
    pub write_snapshots: bool,
}

impl Default for NlsParams {
    fn default() -> Self {
        NlsParams {
            half_period: 16.0,
            n: 256,
            dt: 1e-4,
            t_end: 0.1,
            dealias: true,
            snapshot_every: 100,
            u_amplitude: 1.0,
            u_width: std::f64::consts::SQRT_2,
            momentum: 0.5,
            mass_tolerance: 1e-10,
            write_snapshots: false,
        }
    }
}

/// `u0 = A e^{-|x|^2 / (2 w^2)}` with the prepared wave datum `n0 = -|u0|^2`, `n1 = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "camelCase")]
pub struct SubsonicParams {
    pub half_period: f64,
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    pub speeds: Vec<f64>,
    pub u_amplitude: f64,
    pub u_width: f64,
}

impl Default for SubsonicParams {
    fn default() -> Self {
        SubsonicParams {
            half_period: 4.0,
            n: 64,
            dt: 1e-4,
            t_end: 0.05,
            speeds: vec![1.0, 2.0, 4.0, 8.0],
            u_amplitude: 1.0,
            u_width: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "camelCase")]
pub struct GroundStateParams {
    pub half_period: f64,
    pub n: usize,
    pub tol: f64,
    pub residual_tolerance: f64,
    pub mass_tolerance: f64,
}

impl Default for GroundStateParams {
    fn default() -> Self {
        GroundStateParams {
            half_period: 5.0,
            n: 256,
            tol: 1e-10,
            residual_tolerance: 1e-8,
            mass_tolerance: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "camelCase")]
pub struct BlowupParams {
    /// `townes` uses `(Q, -Q^2)`, `gaussian` uses `(e^{-|x|^2}, -e^{-2|x|^2})`.
    pub profile: String,
    pub omega: f64,
    pub theta: f64,
    pub t_blow: f64,
    pub points: usize,
    /// Range of `(T - t) / omega`.
    pub gap_min: f64,
    pub gap_max: f64,
    pub half_period: f64,
    pub n: usize,
    pub slope_tolerance: f64,
    pub l2_tolerance: f64,
}

impl Default for BlowupParams {
    fn default() -> Self {
        BlowupParams {
            profile: "townes".into(),
            omega: 10.0,
            theta: 0.0,
            t_blow: 20.0,
            points: 9,
            gap_min: 1e-3,
            gap_max: 1e-1,
            half_period: 5.0,
            n: 128,
            slope_tolerance: 0.05,
            l2_tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "camelCase")]
pub struct LifespanParams {
    pub radii: Vec<f64>,
    pub r: f64,
    pub c0: f64,
    pub slope_tolerance: f64,
}

impl Default for LifespanParams {
    fn default() -> Self {
        LifespanParams {
            radii: vec![1e2, 1e3, 1e4, 1e5],
            r: 1.0,
            c0: 1.0,
            slope_tolerance: 0.01,
        }
    }
}

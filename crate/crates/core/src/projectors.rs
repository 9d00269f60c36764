//! Littlewood-Paley, modulation and angular projectors as exact Fourier
//! multipliers on lattices, plus the angular Whitney tiling of direction pairs.

use crate::cutoff::{beta_angular_unchecked, frequency_angle, psi_n, psi_n_support};
use crate::dyadic::DyadicScale;
use crate::error::{invalid, Result, ZlabError};
use crate::grid::{FrequencyGrid, SpaceTimeField, SpaceTimeGrid, SpatialField};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::str::FromStr;

/// Which characteristic surface a modulation is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flavor {
    /// tau + |xi|^2
    S,
    /// tau + |xi|
    WPlus,
    /// tau - |xi|
    WMinus,
    /// |tau| - |xi|
    WFull,
}

impl Flavor {
    /// Modulation variable at (xi, tau).
    #[inline]
    pub fn modulation(self, abs_xi: f64, tau: f64) -> f64 {
        match self {
            Flavor::S => tau + abs_xi * abs_xi,
            Flavor::WPlus => tau + abs_xi,
            Flavor::WMinus => tau - abs_xi,
            Flavor::WFull => tau.abs() - abs_xi,
        }
    }

    /// Flavor of the conjugate function, for the half-wave flavors.
    pub fn conjugate(self) -> Option<Flavor> {
        match self {
            Flavor::WPlus => Some(Flavor::WMinus),
            Flavor::WMinus => Some(Flavor::WPlus),
            Flavor::WFull => Some(Flavor::WFull),
            Flavor::S => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Flavor::S => "S",
            Flavor::WPlus => "W+",
            Flavor::WMinus => "W-",
            Flavor::WFull => "W",
        }
    }
}

impl FromStr for Flavor {
    type Err = ZlabError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "S" | "s" => Ok(Flavor::S),
            "W+" | "w+" | "Wplus" | "wplus" => Ok(Flavor::WPlus),
            "W-" | "w-" | "Wminus" | "wminus" => Ok(Flavor::WMinus),
            "W" | "w" | "Wfull" | "wfull" => Ok(Flavor::WFull),
            other => Err(invalid("flavor", format!("unknown flavor `{other}`"))),
        }
    }
}

/// Sector `j` of the angular decomposition at level `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AngularSector {
    pub a: DyadicScale,
    pub j: u64,
}

impl AngularSector {
    pub fn new(a: DyadicScale, j: u64) -> Result<Self> {
        if j >= a.value() {
            return Err(invalid("j", format!("sector {j} outside [0, {})", a.value())));
        }
        Ok(AngularSector { a, j })
    }

    /// Multiplier value at frequency (xi1, xi2); the origin belongs to sector 0.
    #[inline]
    pub fn weight(&self, xi1: f64, xi2: f64) -> f64 {
        if xi1 == 0.0 && xi2 == 0.0 {
            return if self.j == 0 { 1.0 } else { 0.0 };
        }
        beta_angular_unchecked(self.a.value() as i64, self.j as i64, frequency_angle(xi1, xi2))
    }
}

/// Dyadic bands `N` whose support meets the lattice, in increasing order.
pub fn admissible_bands(grid: &FrequencyGrid) -> Vec<DyadicScale> {
    let fmax = grid.max_abs_freq();
    (0..62)
        .map(DyadicScale::from_exponent)
        .take_while(|n| psi_n_support(*n).0 <= fmax)
        .collect()
}

fn check_band(grid: &FrequencyGrid, n: DyadicScale) -> Result<()> {
    let fmax = grid.max_abs_freq();
    if psi_n_support(n).0 > fmax {
        return Err(ZlabError::BandAboveNyquist {
            n: n.value(),
            max_freq: fmax,
        });
    }
    Ok(())
}

/// `P_N u`: multiplies coefficients by `psi_N(|xi|)`.
pub fn project_dyadic(u: &SpatialField, n: DyadicScale) -> Result<SpatialField> {
    check_band(&u.grid, n)?;
    Ok(u.multiplier(|a, b| psi_n(n, a.hypot(b)).into()))
}

/// `P_N` applied in xi to a space-time field.
pub fn project_dyadic_st(w: &SpaceTimeField, n: DyadicScale) -> Result<SpaceTimeField> {
    check_band(&w.grid.spatial, n)?;
    Ok(w.multiplier(|a, b, _| psi_n(n, a.hypot(b))))
}

/// Largest modulation magnitude a flavor can reach on the grid.
pub fn max_modulation(grid: &SpaceTimeGrid, flavor: Flavor) -> f64 {
    let f = grid.spatial.max_abs_freq();
    let t = grid.tau_nyquist();
    match flavor {
        Flavor::S => t + f * f,
        _ => t + f,
    }
}

/// Modulation projector `S_L`, `W+_L`, `W-_L` or the `|tau| - |xi|` variant.
/// Bands beyond the reachable modulation are empty; a warning is logged.
pub fn project_modulation(w: &SpaceTimeField, l: DyadicScale, flavor: Flavor) -> SpaceTimeField {
    let lo = psi_n_support(l).0;
    if lo > max_modulation(&w.grid, flavor) {
        log::warn!(
            "modulation band L={} is empty on this grid for flavor {}",
            l,
            flavor.name()
        );
    }
    w.multiplier(|a, b, t| psi_n(l, flavor.modulation(a.hypot(b), t)))
}

/// Angular projector `Q^A_j` on a spatial field.
pub fn project_angular(u: &SpatialField, sector: AngularSector) -> SpatialField {
    u.multiplier(|a, b| sector.weight(a, b).into())
}

/// Angular projector `Q^A_j` acting in xi on a space-time field.
pub fn project_angular_st(w: &SpaceTimeField, sector: AngularSector) -> SpaceTimeField {
    w.multiplier(|a, b, _| sector.weight(a, b))
}

/// One element of the angular Whitney decomposition of direction pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WhitneyTile {
    pub a: u64,
    pub j1: u64,
    pub j2: u64,
}

impl WhitneyTile {
    pub fn is_parallel(&self, m: u64) -> bool {
        self.a == m && cyclic_distance(self.j1, self.j2, self.a) <= 16
    }
}

pub fn cyclic_distance(j1: u64, j2: u64, a: u64) -> u64 {
    let d = j1.abs_diff(j2) % a;
    d.min(a - d)
}

/// Enumerates the parallel tiles at level `M` (cyclic |j1 - j2| <= 16) and the
/// transverse tiles at every level 64 <= A <= M (16 <= cyclic |j1 - j2| <= 32).
pub fn whitney_tiles(m: DyadicScale) -> Result<Vec<WhitneyTile>> {
    let mv = m.value();
    if mv < 64 {
        return Err(invalid("M", format!("{mv} < 64")));
    }
    let mut out = Vec::new();
    for j1 in 0..mv {
        for j2 in 0..mv {
            if cyclic_distance(j1, j2, mv) <= 16 {
                out.push(WhitneyTile { a: mv, j1, j2 });
            }
        }
    }
    let mut a = 64;
    while a <= mv {
        for j1 in 0..a {
            for j2 in 0..a {
                let d = cyclic_distance(j1, j2, a);
                if (16..=32).contains(&d) {
                    out.push(WhitneyTile { a, j1, j2 });
                }
            }
        }
        a *= 2;
    }
    Ok(out)
}

/// Core sector of a line direction at level `A`: nearest sector centre j pi / A.
pub fn core_sector(a: u64, theta: f64) -> u64 {
    let s = (a as f64 * theta / PI).round() as i64;
    s.rem_euclid(a as i64) as u64
}

/// Coverage report for the Whitney tiling on a mesh of direction pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WhitneyCoverage {
    pub pairs: usize,
    pub uncovered: usize,
    pub max_multiplicity: usize,
}

/// Checks every pair of directions on a mesh of `steps` equally spaced angles in
/// [0, 2 pi): each pair is assigned to the tiles whose core sectors contain it.
pub fn whitney_coverage(m: DyadicScale, steps: usize) -> Result<WhitneyCoverage> {
    let tiles: std::collections::HashSet<WhitneyTile> = whitney_tiles(m)?.into_iter().collect();
    let mv = m.value();
    let mut levels = vec![];
    let mut a = 64;
    while a <= mv {
        levels.push(a);
        a *= 2;
    }
    let mut uncovered = 0;
    let mut max_mult = 0;
    for p in 0..steps {
        let t1 = 2.0 * PI * p as f64 / steps as f64;
        for q in 0..steps {
            let t2 = 2.0 * PI * q as f64 / steps as f64;
            let mut count = 0;
            for &a in &levels {
                let tile = WhitneyTile {
                    a,
                    j1: core_sector(a, t1),
                    j2: core_sector(a, t2),
                };
                if tiles.contains(&tile) {
                    count += 1;
                }
            }
            if count == 0 {
                uncovered += 1;
            }
            max_mult = max_mult.max(count);
        }
    }
    Ok(WhitneyCoverage {
        pairs: steps * steps,
        uncovered,
        max_multiplicity: max_mult,
    })
}

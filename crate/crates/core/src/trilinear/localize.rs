//! Index map between intervals of length `1/A` in `[N1/4, 4 N1]` under the
//! constraint `k <= x^2 - y^2 <= k + N1/A`, with a mesh verification.

use crate::dyadic::DyadicScale;
use crate::error::{invalid, Result, ZlabError};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Half-width of the window of intervals around `k(j)` that must contain `x`.
pub const WINDOW: i64 = 100;
/// Largest allowed number of `j` sharing one image.
pub const MULTIPLICITY: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizeReport {
    pub n1: u64,
    pub a: u64,
    pub k_offset: f64,
    pub mesh: f64,
    /// `(j, k(j))` for every interval index.
    pub mapping: Vec<(i64, i64)>,
    pub pairs_checked: u64,
    pub containment_violations: u64,
    /// Largest `|A x - k(j)|` seen, in units of interval length.
    pub max_offset: f64,
    pub max_multiplicity: usize,
}

impl LocalizeReport {
    pub fn passed(&self) -> bool {
        self.containment_violations == 0 && self.max_multiplicity <= MULTIPLICITY
    }
}

/// `k(j)`: index of the interval holding `sqrt(j^2 / A^2 + k)`.
pub fn interval_image(j: i64, a: f64, k_offset: f64) -> i64 {
    let jf = j as f64;
    (jf * jf + a * a * k_offset).max(0.0).sqrt().round() as i64
}

fn validate(n1: DyadicScale, a: DyadicScale, k_offset: f64, mesh: f64) -> Result<()> {
    let (nf, af) = (n1.value_f64(), a.value_f64());
    if 4.0 * af > nf {
        return Err(ZlabError::Hypothesis(format!("localize: requires A << N1, got A={a}, N1={n1}")));
    }
    if !k_offset.is_finite() || 4.0 * k_offset.abs() > nf * nf {
        return Err(ZlabError::Hypothesis(format!(
            "localize: requires |k| << N1^2, got k={k_offset}, N1={n1}"
        )));
    }
    if !(mesh.is_finite() && mesh > 0.0) {
        return Err(invalid("mesh", format!("must be positive, got {mesh}")));
    }
    Ok(())
}

/// Builds `j -> k(j)` and checks it on every mesh pair `(x, y)` obeying the
/// constraint: `x` must lie in `I_{k(j)-100} u ... u I_{k(j)+100}` whenever
/// `y` lies in `I_j`, and no image may be hit more than 100 times.
pub fn localize_map(n1: DyadicScale, a: DyadicScale, k_offset: f64, mesh: f64) -> Result<LocalizeReport> {
    validate(n1, a, k_offset, mesh)?;
    let (nf, af) = (n1.value_f64(), a.value_f64());
    let (lo, hi) = (0.25 * nf, 4.0 * nf);
    let j_lo = (af * lo - 0.5).ceil() as i64;
    let j_hi = (af * hi + 0.5).floor() as i64;
    let mapping: Vec<(i64, i64)> = (j_lo..=j_hi).map(|j| (j, interval_image(j, af, k_offset))).collect();
    let mut hits: HashMap<i64, usize> = HashMap::new();
    for (_, kj) in &mapping {
        *hits.entry(*kj).or_default() += 1;
    }
    let max_multiplicity = hits.values().copied().max().unwrap_or(0);

    let steps = ((hi - lo) / mesh).round() as i64;
    let band = nf / af;
    let mut pairs = 0u64;
    let mut violations = 0u64;
    let mut max_offset = 0.0f64;
    for iy in 0..=steps {
        let y = lo + iy as f64 * mesh;
        // y may sit on the boundary of two intervals; both must be honoured.
        let ay = af * y;
        let mut js = vec![ay.round() as i64];
        let frac = ay - ay.floor();
        if (frac - 0.5).abs() < 1e-9 {
            js = vec![ay.floor() as i64, ay.ceil() as i64];
        }
        let x2_lo = (y * y + k_offset).max(0.0);
        let x2_hi = y * y + k_offset + band;
        if x2_hi < lo * lo {
            continue;
        }
        let x_min = x2_lo.sqrt().max(lo);
        let x_max = x2_hi.sqrt().min(hi);
        if x_max < x_min {
            continue;
        }
        let ix0 = ((x_min - lo) / mesh).ceil() as i64;
        let ix1 = ((x_max - lo) / mesh).floor() as i64;
        for ix in ix0..=ix1 {
            let x = lo + ix as f64 * mesh;
            for &j in &js {
                let kj = interval_image(j, af, k_offset);
                let off = (af * x - kj as f64).abs();
                max_offset = max_offset.max(off);
                pairs += 1;
                if off > WINDOW as f64 + 0.5 {
                    violations += 1;
                }
            }
        }
    }
    Ok(LocalizeReport {
        n1: n1.value(),
        a: a.value(),
        k_offset,
        mesh,
        mapping,
        pairs_checked: pairs,
        containment_violations: violations,
        max_offset,
        max_multiplicity,
    })
}

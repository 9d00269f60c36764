//! Smooth cutoff functions: the bump `psi`, its dyadic differences `psi_N`,
//! and the equidistant angular partition `beta^A_j`.

use crate::dyadic::DyadicScale;
use crate::error::{invalid, Result};
use std::f64::consts::PI;

fn h(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

/// Even C-infinity bump, exactly 1 on [-1, 1] and exactly 0 outside (-2, 2).
pub fn psi(r: f64) -> f64 {
    let a = r.abs();
    if a <= 1.0 {
        return 1.0;
    }
    if a >= 2.0 {
        return 0.0;
    }
    let p = h(2.0 - a);
    let q = h(a - 1.0);
    p / (p + q)
}

/// Dyadic piece: `psi(r)` for N = 1, `psi(r/N) - psi(2r/N)` otherwise.
pub fn psi_n(n: DyadicScale, r: f64) -> f64 {
    let nv = n.value_f64();
    if n.exponent() == 0 {
        psi(r)
    } else {
        psi(r / nv) - psi(2.0 * r / nv)
    }
}

/// Inclusive support of `psi_N` in |r|.
pub fn psi_n_support(n: DyadicScale) -> (f64, f64) {
    let nv = n.value_f64();
    if n.exponent() == 0 {
        (0.0, 2.0)
    } else {
        (nv / 2.0, 2.0 * nv)
    }
}

/// `beta_j(s) = psi(s - j) / sum_k psi(s - k)`; a partition of unity on the line.
pub fn beta(j: i64, s: f64) -> f64 {
    let num = psi(s - j as f64);
    if num == 0.0 {
        return 0.0;
    }
    let base = s.floor() as i64;
    let mut den = 0.0;
    for k in (base - 2)..=(base + 3) {
        den += psi(s - k as f64);
    }
    num / den
}

/// Angular cutoff of sector `j` at level `A`, periodised in theta with period pi,
/// so that it depends only on the line through the frequency.
pub fn beta_angular(a: DyadicScale, j: i64, theta: f64) -> Result<f64> {
    let av = a.value() as i64;
    if j < 0 || j >= av {
        return Err(invalid("j", format!("sector index {j} outside [0, {av})")));
    }
    Ok(beta_angular_unchecked(av, j, theta))
}

pub(crate) fn beta_angular_unchecked(a: i64, j: i64, theta: f64) -> f64 {
    let af = a as f64;
    // Reduce the line angle into (-pi/2, pi/2] so s = A theta / pi lies in (-A/2, A/2].
    let mut t = theta % PI;
    if t > PI / 2.0 {
        t -= PI;
    } else if t <= -PI / 2.0 {
        t += PI;
    }
    let s = af * t / PI;
    let mut sum = 0.0;
    for m in -2..=2 {
        sum += beta(j + m * a, s);
    }
    sum
}

/// Angle of a frequency vector; the origin is reported as angle 0 (sector 0).
pub fn frequency_angle(xi1: f64, xi2: f64) -> f64 {
    if xi1 == 0.0 && xi2 == 0.0 {
        0.0
    } else {
        xi2.atan2(xi1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_examples() {
        assert_eq!(psi(0.5), 1.0);
        assert_eq!(psi(3.0), 0.0);
        assert!((psi(1.5) - 0.5).abs() < 1e-15);
        assert_eq!(psi(-1.5), psi(1.5));
        assert_eq!(psi(2.0), 0.0);
        assert_eq!(psi(1.0), 1.0);
    }

    #[test]
    fn psi_n_examples() {
        let d = DyadicScale::from_value;
        assert_eq!(psi_n(d(2).unwrap(), 0.0), 0.0);
        assert_eq!(psi_n(d(4).unwrap(), 4.0), 1.0);
        assert_eq!(psi_n(d(1).unwrap(), 0.3), 1.0);
        // support endpoints
        let n8 = d(8).unwrap();
        assert_eq!(psi_n(n8, 4.0), 0.0);
        assert_eq!(psi_n(n8, 16.0), 0.0);
        assert!(psi_n(n8, 4.5) > 0.0);
    }

    #[test]
    fn beta_center_values() {
        // neighbours -1, 0, 1 all have psi = 1 at the centre
        assert!((beta(0, 0.0) - 1.0 / 3.0).abs() < 1e-15);
        let a = DyadicScale::from_value(64).unwrap();
        assert!(beta_angular(a, 0, 0.0).unwrap() > 0.0);
        assert_eq!(beta_angular(a, 32, 0.0).unwrap(), 0.0);
        assert!(beta_angular(a, 64, 0.0).is_err());
    }

    #[test]
    fn angular_is_line_symmetric() {
        let a = DyadicScale::from_value(16).unwrap();
        for &th in &[0.1, 1.3, 2.9, -0.7] {
            for j in 0..16 {
                let x = beta_angular(a, j, th).unwrap();
                let y = beta_angular(a, j, th - PI).unwrap();
                assert!((x - y).abs() < 1e-13);
            }
        }
    }
}

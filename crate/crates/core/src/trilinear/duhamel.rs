//! Lower bounds for the first Picard iterates on frequency rectangles.
//!
//! The time integral of a pure phase is taken in closed form,
//! `int_0^t e^{i s phi} ds = (e^{i t phi} - 1) / (i phi)`, and the remaining
//! frequency integrals use tensor Gauss-Legendre quadrature over rectangles.

use super::boxes::{Quadrature, DEFAULT_QUADRATURE};
use crate::dyadic::DyadicScale;
use crate::error::{invalid, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]` in frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Rect {
    fn shifted(&self, dx: f64, dy: f64) -> Rect {
        Rect {
            x: (self.x.0 + dx, self.x.1 + dx),
            y: (self.y.0 + dy, self.y.1 + dy),
        }
    }

    fn reflected(&self) -> Rect {
        Rect {
            x: (-self.x.1, -self.x.0),
            y: (-self.y.1, -self.y.0),
        }
    }

    fn intersect(&self, o: &Rect) -> Option<Rect> {
        let x = (self.x.0.max(o.x.0), self.x.1.min(o.x.1));
        let y = (self.y.0.max(o.y.0), self.y.1.min(o.y.1));
        (x.1 > x.0 && y.1 > y.0).then_some(Rect { x, y })
    }
}

/// Measured ratio and the same ratio divided by its predicted power of `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub raw: f64,
    pub normalized: f64,
}

fn bracket(x: f64, y: f64) -> f64 {
    (1.0 + x * x + y * y).sqrt()
}

/// `int_0^t e^{i s phi} ds`.
pub fn phase_integral(t: f64, phi: f64) -> Complex64 {
    if (t * phi).abs() < 1e-8 {
        return Complex64::new(t, 0.5 * t * t * phi);
    }
    Complex64::new((t * phi).sin() / phi, (1.0 - (t * phi).cos()) / phi)
}

fn sobolev_sq(q: &Quadrature, r: &Rect, s: f64) -> f64 {
    let mut acc = 0.0;
    for (x, wx) in q.on(r.x.0, r.x.1) {
        for (y, wy) in q.on(r.y.0, r.y.1) {
            acc += wx * wy * bracket(x, y).powf(2.0 * s);
        }
    }
    acc
}

fn check_window(n: DyadicScale, big_t: f64, t: f64) -> Result<f64> {
    if !(big_t.is_finite() && big_t > 0.0) {
        return Err(invalid("T", format!("must be positive, got {big_t}")));
    }
    if !(t.is_finite() && (0.0..=big_t).contains(&t)) {
        return Err(invalid("t", format!("must lie in [0, T] = [0, {big_t}], got {t}")));
    }
    let nf = n.value_f64();
    if nf * big_t < 4.0 {
        return Err(invalid("N", format!("need N >> 1/T, got N T = {}", nf * big_t)));
    }
    Ok(nf)
}

/// `int_R <xi>^{2s} |F(xi)|^2` with `F(xi) = sum over sources of int phase_integral`.
fn region_norm_sq(q: &Quadrature, region: &Rect, s: f64, mut f: impl FnMut(f64, f64) -> Complex64) -> f64 {
    let mut acc = 0.0;
    for (x, wx) in q.on(region.x.0, region.x.1) {
        for (y, wy) in q.on(region.y.0, region.y.1) {
            acc += wx * wy * bracket(x, y).powf(2.0 * s) * f(x, y).norm_sqr();
        }
    }
    acc
}

fn integrate_over(q: &Quadrature, r: &Rect, mut f: impl FnMut(f64, f64) -> Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, wx) in q.on(r.x.0, r.x.1) {
        for (y, wy) in q.on(r.y.0, r.y.1) {
            acc += f(x, y) * (wx * wy);
        }
    }
    acc
}

/// Schrodinger Duhamel term of `u Re(e^{-it<grad>} v)` with `u` the indicator of
/// a thin rectangle at `(-N, 0)` and `v` of a pair of rectangles at `+-(2N+1, 0)`,
/// measured in `H^k` on the output rectangle at `(N+1, 0)`. The ratio is
/// divided by `|u|_{H^k} |v|_{H^l}` and normalised by `N^{-l-1/2}`.
pub fn duhamel_lower_bound_1(n: DyadicScale, big_t: f64, k: f64, ell: f64, t: f64) -> Result<LowerBound> {
    let nf = check_window(n, big_t, t)?;
    let q = Quadrature::new(DEFAULT_QUADRATURE)?;
    let e = 1.0 / nf;
    let a = Rect {
        x: (-nf - e, -nf + e),
        y: (-1.0, 1.0),
    };
    let b = Rect {
        x: (2.0 * nf + 1.0 - 2.0 * e, 2.0 * nf + 1.0 + 2.0 * e),
        y: (-2.0, 2.0),
    };
    let v_boxes = [b, b.reflected()];
    let region = Rect {
        x: (nf + 1.0 - e, nf + 1.0 + e),
        y: (-1.0, 1.0),
    };
    let num = region_norm_sq(&q, &region, k, |x, y| {
        let xi2 = x * x + y * y;
        let mut acc = Complex64::new(0.0, 0.0);
        for vb in &v_boxes {
            // xi - eta in vb  <=>  eta in xi - vb.
            let Some(src) = a.intersect(&vb.reflected().shifted(x, y)) else {
                continue;
            };
            acc += integrate_over(&q, &src, |p, r| {
                let base = xi2 - p * p - r * r;
                let w = bracket(x - p, y - r);
                phase_integral(t, base - w) + phase_integral(t, base + w)
            });
        }
        acc * (0.5 / (2.0 * PI))
    });
    let du = sobolev_sq(&q, &a, k);
    let dv: f64 = v_boxes.iter().map(|r| sobolev_sq(&q, r, ell)).sum();
    let raw = (num / (du * dv)).sqrt();
    Ok(LowerBound {
        raw,
        normalized: raw / nf.powf(-ell - 0.5),
    })
}

/// Wave Duhamel term of `Delta/<grad> |e^{it Delta} u|^2` with `u` the sum of
/// indicators of rectangles at `(N+1, 0)` and `(-N, 0)`, measured in `H^l` on
/// the output rectangle at `(2N+1, 0)`. The ratio is divided by `|u|_{H^k}^2`
/// and normalised by `N^{l-2k+1/2}`.
pub fn duhamel_lower_bound_2(n: DyadicScale, big_t: f64, k: f64, ell: f64, t: f64) -> Result<LowerBound> {
    let nf = check_window(n, big_t, t)?;
    let q = Quadrature::new(DEFAULT_QUADRATURE)?;
    let e = 1.0 / nf;
    let boxes = [
        Rect {
            x: (nf + 1.0 - e, nf + 1.0 + e),
            y: (-1.0, 1.0),
        },
        Rect {
            x: (-nf - 2.0 * e, -nf + 2.0 * e),
            y: (-2.0, 2.0),
        },
    ];
    let region = Rect {
        x: (2.0 * nf + 1.0 - e, 2.0 * nf + 1.0 + e),
        y: (-1.0, 1.0),
    };
    let num = region_norm_sq(&q, &region, ell, |x, y| {
        let r2 = x * x + y * y;
        let br = bracket(x, y);
        let mut acc = Complex64::new(0.0, 0.0);
        for bi in &boxes {
            for bj in &boxes {
                // eta in bi and eta - xi in bj.
                let Some(src) = bi.intersect(&bj.shifted(x, y)) else {
                    continue;
                };
                acc += integrate_over(&q, &src, |p, r| {
                    let phi = br - p * p - r * r + (p - x).powi(2) + (r - y).powi(2);
                    phase_integral(t, phi)
                });
            }
        }
        acc * (r2 / br / (2.0 * PI))
    });
    let du: f64 = boxes.iter().map(|r| sobolev_sq(&q, r, k)).sum();
    let raw = num.sqrt() / du;
    Ok(LowerBound {
        raw,
        normalized: raw / nf.powf(ell - 2.0 * k + 0.5),
    })
}

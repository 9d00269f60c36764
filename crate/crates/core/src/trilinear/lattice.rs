//! The trilinear functional on space-time lattices.
//!
//! `I(f, g1, g2) = sum f(z1 - z2) g1(z1) g2(z2) dV^2` with `f` taken as zero for
//! differences that leave the lattice (no periodic wrap).

use crate::cutoff::psi_n;
use crate::dyadic::DyadicScale;
use crate::error::{Result, ZlabError};
use crate::grid::{signed_index, SpaceTimeField, SpaceTimeGrid};
use crate::projectors::Flavor;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::FftPlanner;

fn check_grids(f: &SpaceTimeField, g1: &SpaceTimeField, g2: &SpaceTimeField) -> Result<()> {
    if f.grid != g1.grid || f.grid != g2.grid {
        return Err(ZlabError::GridMismatch(
            "trilinear slots live on different grids".into(),
        ));
    }
    Ok(())
}

/// In-place multidimensional FFT over a row-major array of shape `dims`.
fn fft_nd(data: &mut [Complex64], dims: &[usize], inverse: bool) {
    let mut planner = FftPlanner::new();
    let total: usize = dims.iter().product();
    assert_eq!(total, data.len());
    let mut stride = 1;
    for axis in (0..dims.len()).rev() {
        let n = dims[axis];
        let plan = if inverse {
            planner.plan_fft_inverse(n)
        } else {
            planner.plan_fft_forward(n)
        };
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        let outer = total / (n * stride);
        for o in 0..outer {
            for s in 0..stride {
                let base = o * n * stride + s;
                for k in 0..n {
                    buf[k] = data[base + k * stride];
                }
                plan.process(&mut buf);
                for k in 0..n {
                    data[base + k * stride] = buf[k];
                }
            }
        }
        stride *= n;
    }
}

/// Places a lattice field into a zero-padded array of twice the size per axis,
/// each value at its signed index taken modulo the padded length.
fn pad(w: &SpaceTimeField) -> Vec<Complex64> {
    let g = &w.grid;
    let n = g.spatial.n;
    let nt = g.n_t;
    let (pn, pt) = (2 * n, 2 * nt);
    let mut out = vec![Complex64::new(0.0, 0.0); pn * pn * pt];
    for (idx, v) in w.values.iter().enumerate() {
        if *v == Complex64::new(0.0, 0.0) {
            continue;
        }
        let (s, l) = g.split(idx);
        let a = signed_index(s / n, n).rem_euclid(pn as i64) as usize;
        let b = signed_index(s % n, n).rem_euclid(pn as i64) as usize;
        let c = signed_index(l, nt).rem_euclid(pt as i64) as usize;
        out[(a * pn + b) * pt + c] = *v;
    }
    out
}

/// Fast evaluation through a zero-padded FFT convolution.
pub fn trilinear_i(f: &SpaceTimeField, g1: &SpaceTimeField, g2: &SpaceTimeField) -> Result<Complex64> {
    check_grids(f, g1, g2)?;
    let g = &f.grid;
    let n = g.spatial.n;
    let nt = g.n_t;
    let dims = [2 * n, 2 * n, 2 * nt];
    let mut pf = pad(f);
    let mut p2 = pad(g2);
    fft_nd(&mut pf, &dims, false);
    fft_nd(&mut p2, &dims, false);
    for (a, b) in pf.iter_mut().zip(&p2) {
        *a *= b;
    }
    fft_nd(&mut pf, &dims, true);
    let norm = 1.0 / (dims[0] * dims[1] * dims[2]) as f64;
    let p1 = pad(g1);
    let mut acc = Complex64::new(0.0, 0.0);
    for (a, b) in p1.iter().zip(&pf) {
        acc += a * b;
    }
    let vol = g.cell_volume();
    Ok(acc * norm * vol * vol)
}

/// Direct double sum over all lattice pairs; the reference for [`trilinear_i`].
pub fn trilinear_i_direct(
    f: &SpaceTimeField,
    g1: &SpaceTimeField,
    g2: &SpaceTimeField,
) -> Result<Complex64> {
    check_grids(f, g1, g2)?;
    let g = &f.grid;
    let n = g.spatial.n;
    let nt = g.n_t;
    let h = (n / 2) as i64;
    let ht = (nt / 2) as i64;
    let coords = |idx: usize| -> (i64, i64, i64) {
        let (s, l) = g.split(idx);
        (
            signed_index(s / n, n),
            signed_index(s % n, n),
            signed_index(l, nt),
        )
    };
    let lookup = |a: i64, b: i64, c: i64| -> Option<usize> {
        if a < -h || a >= h || b < -h || b >= h || c < -ht || c >= ht {
            return None;
        }
        let ia = a.rem_euclid(n as i64) as usize;
        let ib = b.rem_euclid(n as i64) as usize;
        let ic = c.rem_euclid(nt as i64) as usize;
        Some((ia * n + ib) * nt + ic)
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for i1 in 0..g.len() {
        let v1 = g1.values[i1];
        let (a1, b1, c1) = coords(i1);
        for i2 in 0..g.len() {
            let (a2, b2, c2) = coords(i2);
            if let Some(k) = lookup(a1 - a2, b1 - b2, c1 - c2) {
                acc += f.values[k] * v1 * g2.values[i2];
            }
        }
    }
    let vol = g.cell_volume();
    Ok(acc * vol * vol)
}

/// Membership weight of a point in the dyadic block `P_N` and modulation block.
#[inline]
pub fn block_weight(n: DyadicScale, l: DyadicScale, flavor: Flavor, abs_xi: f64, tau: f64) -> f64 {
    psi_n(n, abs_xi) * psi_n(l, flavor.modulation(abs_xi, tau))
}

/// Field with iid complex Gaussian values on the lattice points of the block
/// `P_N` intersected with the modulation block `L` of `flavor` (Nyquist planes
/// excluded), normalised to unit L2 norm. Deterministic in `seed`.
pub fn make_dyadic_random_field(
    grid: SpaceTimeGrid,
    n: DyadicScale,
    l: DyadicScale,
    flavor: Flavor,
    seed: u64,
) -> Result<SpaceTimeField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut any = false;
    for (idx, v) in values.iter_mut().enumerate() {
        if grid.on_nyquist(idx) {
            continue;
        }
        let (a, b, t) = grid.zeta(idx);
        if block_weight(n, l, flavor, a.hypot(b), t) > 0.0 {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            *v = Complex64::new(re, im);
            any = true;
        }
    }
    if !any {
        return Err(ZlabError::EmptyBand(format!(
            "N={n}, L={l}, flavor {} has no lattice points",
            flavor.name()
        )));
    }
    let w = SpaceTimeField { grid, values };
    let norm = w.l2_norm();
    Ok(w.scale(Complex64::new(1.0 / norm, 0.0)))
}

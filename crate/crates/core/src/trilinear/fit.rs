use crate::error::{invalid, Result, ZlabError};
use serde::{Deserialize, Serialize};

/// Least-squares line through `(ln N, ln value)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
}

pub fn fit_exponent(points: &[(f64, f64)]) -> Result<ExponentFit> {
    if points.len() < 3 {
        return Err(ZlabError::Empty("slope fit needs at least 3 points"));
    }
    if let Some(&(s, v)) = points
        .iter()
        .find(|(s, v)| !(*s > 0.0 && *v > 0.0 && s.is_finite() && v.is_finite()))
    {
        return Err(invalid(
            "points",
            format!("log-log fit needs positive finite data, got ({s}, {v})"),
        ));
    }
    let m = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(invalid("points", "all scales coincide"));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    Ok(ExponentFit {
        slope,
        intercept,
        residual: (ss / m).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_law() {
        let f = fit_exponent(&[(2.0, 4.0), (4.0, 16.0), (8.0, 64.0)]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14);
        assert!(f.residual < 1e-14);
    }

    #[test]
    fn constant() {
        let f = fit_exponent(&[(2.0, 3.0), (4.0, 3.0), (8.0, 3.0)]).unwrap();
        assert!(f.slope.abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(fit_exponent(&[(2.0, 1.0), (4.0, 1.0)]).is_err());
        assert!(fit_exponent(&[(2.0, 1.0), (4.0, 0.0), (8.0, 1.0)]).is_err());
    }
}

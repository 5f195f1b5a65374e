//! Least-squares slope fits for convergence and decay studies.

use crate::{Error, Result};

/// Ordinary least-squares slope of `y` against `x`.
pub fn linear_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::param("slope fit needs at least two paired points"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
    }
    if sxx == 0.0 {
        return Err(Error::param("slope fit with all abscissae equal"));
    }
    Ok(sxy / sxx)
}

/// Slope of `log y` against `log x`. All values must be positive.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.iter().chain(y).any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::param("log-log fit needs positive finite values"));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    linear_slope(&lx, &ly)
}

/// Median of a nonempty slice (mean of the middle pair for even lengths).
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k == 0 {
        return f64::NAN;
    }
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_power_law() {
        let x = [1.0, 2.0, 4.0, 8.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-2.5)).collect();
        assert!((loglog_slope(&x, &y).unwrap() + 2.5).abs() < 1e-12);
        assert!(loglog_slope(&x, &[1.0, 0.0, 1.0, 1.0]).is_err());
        assert!(linear_slope(&[1.0], &[1.0]).is_err());
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}

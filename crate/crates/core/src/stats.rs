//! Least-squares fits with percentile-bootstrap confidence intervals.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::sampling::rng_for;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_ci: (f64, f64),
    pub intercept_ci: (f64, f64),
    pub n: usize,
    pub resamples: usize,
}

impl LinearFit {
    pub fn slope_ci_contains_zero(&self) -> bool {
        self.slope_ci.0 <= 0.0 && 0.0 <= self.slope_ci.1
    }

    pub fn slope_ci_excludes_zero_positive(&self) -> bool {
        self.slope_ci.0 > 0.0
    }
}

/// Ordinary least squares `y ≈ slope·x + intercept`; `None` if `x` is constant.
pub fn ols(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let n = x.len();
    if n < 2 || n != y.len() {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    let w = pos - lo as f64;
    sorted[lo] * (1.0 - w) + sorted[hi] * w
}

/// OLS fit with a 95% percentile bootstrap over `(x, y)` pairs.
/// Resamples with constant `x` are skipped.
pub fn fit_with_bootstrap(x: &[f64], y: &[f64], resamples: usize, seed: u64) -> Option<LinearFit> {
    let (slope, intercept) = ols(x, y)?;
    let n = x.len();
    let mut slopes = Vec::with_capacity(resamples);
    let mut intercepts = Vec::with_capacity(resamples);
    let (mut bx, mut by) = (vec![0.0; n], vec![0.0; n]);
    for r in 0..resamples {
        let mut rng = rng_for(seed, r as u64);
        for k in 0..n {
            let i = rng.gen_range(0..n);
            bx[k] = x[i];
            by[k] = y[i];
        }
        if let Some((s, c)) = ols(&bx, &by) {
            slopes.push(s);
            intercepts.push(c);
        }
    }
    slopes.sort_by(|a, b| a.total_cmp(b));
    intercepts.sort_by(|a, b| a.total_cmp(b));
    Some(LinearFit {
        slope,
        intercept,
        slope_ci: (percentile(&slopes, 0.025), percentile(&slopes, 0.975)),
        intercept_ci: (percentile(&intercepts, 0.025), percentile(&intercepts, 0.975)),
        n,
        resamples,
    })
}

/// Per-group minima of `y`, keyed by exactly equal `x`.
pub fn group_minima(x: &[f64], y: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut pairs: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let (mut gx, mut gy) = (Vec::new(), Vec::new());
    for (a, b) in pairs {
        if gx.last() != Some(&a) {
            gx.push(a);
            gy.push(b);
        }
    }
    (gx, gy)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 3.0, 5.0, 7.0];
        let (s, c) = ols(&x, &y).unwrap();
        assert!((s - 2.0).abs() < 1e-15 && (c - 1.0).abs() < 1e-15);
        let fit = fit_with_bootstrap(&x, &y, 200, 1).unwrap();
        assert!((fit.slope_ci.0 - 2.0).abs() < 1e-12 && (fit.slope_ci.1 - 2.0).abs() < 1e-12);
        assert!(ols(&[1.0, 1.0], &[0.0, 2.0]).is_none());
    }

    #[test]
    fn noise_slope_ci_contains_zero() {
        let x: Vec<f64> = (0..40).map(|k| (k % 8) as f64).collect();
        let y: Vec<f64> = (0..40).map(|k| ((k * 7919) % 13) as f64 / 13.0).collect();
        let fit = fit_with_bootstrap(&x, &y, 1000, 9).unwrap();
        assert!(fit.slope_ci_contains_zero(), "{fit:?}");
    }

    #[test]
    fn minima_by_group() {
        let (gx, gy) = group_minima(&[2.0, 1.0, 2.0, 1.0], &[5.0, 3.0, 4.0, 6.0]);
        assert_eq!(gx, vec![1.0, 2.0]);
        assert_eq!(gy, vec![3.0, 4.0]);
    }
}

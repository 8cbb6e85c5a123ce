use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::paths::{path_hausdorff, QuasiGeodesicPath};
use crate::error::{Result, TeichError};
use crate::foliation::{MeasuredFoliation, SlopeCurve};
use crate::projection::{Margin, ProjectionOptions};
use crate::report::ExperimentReport;
use crate::stats::fit_with_bootstrap;
use crate::torus::{ideal_point, TeichGeodesic, TeichPoint};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharpnessConfig {
    pub t_values: Vec<f64>,
    /// Additive constant of the `(K, c)` detours.
    pub c: f64,
    pub k: f64,
    pub grid: usize,
    /// Upper end of the width search, as a multiple of the entry height.
    pub width_max: f64,
    pub bisections: usize,
    pub bootstrap: usize,
    pub seed: u64,
}

impl Default for SharpnessConfig {
    fn default() -> Self {
        SharpnessConfig {
            t_values: vec![5.0, 10.0, 20.0],
            c: 1.0,
            k: 2.0,
            grid: 200,
            width_max: 1e6,
            bisections: 40,
            bootstrap: 1000,
            seed: 0,
        }
    }
}

/// Parabolic translation by `w` at the cusp `xi`, conjugated from
/// `z ↦ z + w` at `∞` by `z ↦ −1/(z − ξ)`.
fn horizontal(p: &TeichPoint, xi: Option<f64>, w: f64) -> TeichPoint {
    let z = p.tau();
    let out = match xi {
        None => z + w,
        Some(x) => {
            let u = -1.0 / (z - x) + w;
            Complex64::new(x, 0.0) - 1.0 / u
        }
    };
    TeichPoint::new(out.re, out.im.max(f64::MIN_POSITIVE)).expect("parabolic image stays in the upper half-plane")
}

fn detour(s1: &TeichPoint, s2: &TeichPoint, xi: Option<f64>, w: f64, cfg: &SharpnessConfig) -> Result<QuasiGeodesicPath> {
    let wps = [*s1, horizontal(s1, xi, w), horizontal(s2, xi, w), *s2];
    QuasiGeodesicPath::from_waypoints(&wps, cfg.grid, cfg.k, cfg.c)
}

/// Widest detour of each sign that still validates, by bisection on the
/// width relative to `width_max`.
fn widest(s1: &TeichPoint, s2: &TeichPoint, xi: Option<f64>, sign: f64, cfg: &SharpnessConfig) -> Result<(f64, QuasiGeodesicPath)> {
    let scale = match xi {
        None => s1.y(),
        Some(x) => {
            let z = s1.tau() - x;
            z.im / z.norm_sqr()
        }
    };
    let mut best = (0.0, detour(s1, s2, xi, 0.0, cfg)?);
    let (mut lo, mut hi) = (0.0f64, cfg.width_max.ln_1p());
    for _ in 0..cfg.bisections {
        let mid = 0.5 * (lo + hi);
        let w = sign * scale * mid.exp_m1();
        match detour(s1, s2, xi, w, cfg) {
            Ok(p) => {
                best = (w, p);
                lo = mid;
            }
            Err(_) => hi = mid,
        }
    }
    Ok(best)
}

/// Detour quasi-geodesics along cusp segments of increasing depth.
pub fn sharpness_demo(
    id: &str,
    line: &TeichGeodesic,
    slope: SlopeCurve,
    cfg: &SharpnessConfig,
    opts: &ProjectionOptions,
) -> Result<ExperimentReport> {
    let alpha = MeasuredFoliation::from_slope(slope);
    let xi = ideal_point(&alpha);
    let same = |e: Option<f64>| match (e, xi) {
        (None, None) => true,
        (Some(u), Some(v)) => (u - v).abs() <= 1e-12 * u.abs().max(1.0),
        _ => false,
    };
    let forward = same(line.forward_ideal_point());
    if !forward && !same(line.backward_ideal_point()) {
        return Err(TeichError::Domain(format!(
            "slope {}/{} is not an endpoint of the geodesic, which is precompact there; cusp excursions required",
            slope.p, slope.q
        )));
    }
    let mut report = ExperimentReport::new(
        id,
        cfg.seed,
        serde_json::to_value(cfg)?,
        &["T", "t1", "t2", "delta_T", "c", "width_plus", "width_minus", "dev_plus", "dev_minus", "mutual", "max_dev"],
    );
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    let mut devs = Vec::new();
    for &t in &cfg.t_values {
        let (t1, t2) = if forward { (t, 2.0 * t) } else { (-2.0 * t, -t) };
        let (s1, s2) = (line.point(t1), line.point(t2));
        let delta_t = line.extremal_length_at(&alpha, t1).max(line.extremal_length_at(&alpha, t2));
        // a point segment only admits the constant path
        let ((wp, plus), (wm, minus)) = if s1 == s2 {
            let p = detour(&s1, &s2, xi, 0.0, cfg)?;
            ((0.0, p.clone()), (0.0, p))
        } else {
            (widest(&s1, &s2, xi, 1.0, cfg)?, widest(&s1, &s2, xi, -1.0, cfg)?)
        };
        let dp = plus.max_deviation(line, opts)?;
        let dm = minus.max_deviation(line, opts)?;
        let mutual = path_hausdorff(plus.samples(), minus.samples());
        let max_dev = dp.max(dm);
        report.push_row(vec![
            t.into(), t1.into(), t2.into(), delta_t.into(), cfg.c.into(), wp.into(), wm.into(), dp.into(),
            dm.into(), mutual.into(), max_dev.into(),
        ]);
        if t > 0.0 {
            xs.push(t);
            ys.push(max_dev);
        }
        devs.push(max_dev);
    }
    let increasing = devs.windows(2).all(|w| w[1] > w[0]);
    report.notes.push(format!("deviation strictly increasing in T: {increasing}"));
    if let Some(fit) = fit_with_bootstrap(&xs, &ys, cfg.bootstrap, cfg.seed) {
        report.fit("deviation_slope", fit.slope, Some(fit.slope_ci));
        report.check("deviation_slope_at_least", Some(Margin::at_most(0.4, fit.slope)), "fit slope >= 0.4");
        report.regressions.push(("deviation_vs_T".into(), fit));
    }
    Ok(report)
}

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{distance_to, point_at_distance};
use crate::error::Result;
use crate::projection::{Margin, ProjectionOptions};
use crate::report::ExperimentReport;
use crate::sampling::{rng_for, uniform_angle};
use crate::stats::{fit_with_bootstrap, group_minima};
use crate::torus::{apply_mapping_class, axis_of, teich_distance, MappingClass};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranslationConfig {
    pub mapping: MappingClass,
    pub distances: Vec<f64>,
    pub n_per_distance: usize,
    pub bootstrap: usize,
    pub seed: u64,
}

/// Displacement `d(x, m·x)` at `d(x, L) = ρ`, from the hyperbolic identity
/// `cosh D = cosh²(2ρ) cosh(2t₀) − sinh²(2ρ)`.
pub fn displacement_formula(rho: f64, t0: f64) -> f64 {
    let (c, s) = ((2.0 * rho).cosh(), (2.0 * rho).sinh());
    0.5 * (c * c * (2.0 * t0).cosh() - s * s).max(1.0).acosh()
}

/// Translation distance of a pseudo-Anosov class as a function of the
/// distance to its axis.
pub fn pa_translation_experiment(id: &str, cfg: &TranslationConfig, opts: &ProjectionOptions) -> Result<ExperimentReport> {
    let (axis, t0) = axis_of(&cfg.mapping)?;
    let mut report = ExperimentReport::new(
        id,
        cfg.seed,
        serde_json::to_value(cfg)?,
        &["distance", "index", "t_base", "angle", "x", "y", "measured_distance", "displacement", "formula", "upper_bound"],
    );
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    let mut lower_worst = f64::INFINITY;
    let mut upper_worst = f64::INFINITY;
    let mut on_axis_err: f64 = 0.0;
    for (i, &d) in cfg.distances.iter().enumerate() {
        for j in 0..cfg.n_per_distance {
            let mut rng = rng_for(cfg.seed, (i * cfg.n_per_distance + j) as u64);
            let t_base = rng.gen_range(0.0..t0);
            let angle = uniform_angle(&mut rng);
            let x = point_at_distance(&axis, t_base, angle, d, opts)?;
            let disp = teich_distance(&x, &apply_mapping_class(&cfg.mapping, &x));
            let measured = if d == 0.0 { 0.0 } else { distance_to(&axis, &x, opts)? };
            let upper = 2.0 * measured + t0;
            lower_worst = lower_worst.min(disp - t0);
            upper_worst = upper_worst.min(upper - disp);
            if d == 0.0 {
                on_axis_err = on_axis_err.max((disp - t0).abs());
            }
            xs.push(d);
            ys.push(disp);
            report.push_row(vec![
                d.into(), j.into(), t_base.into(), angle.into(), x.x().into(), x.y().into(), measured.into(),
                disp.into(), displacement_formula(measured, t0).into(), upper.into(),
            ]);
        }
    }
    report.fit("t0", t0, None);
    report.fit("on_axis_error", on_axis_err, None);
    let (gx, gy) = group_minima(&xs, &ys);
    if let Some(fit) = fit_with_bootstrap(&gx, &gy, cfg.bootstrap, cfg.seed) {
        report.fit("c0", fit.slope, Some(fit.slope_ci));
        report.fit("c1", -fit.intercept, Some((-fit.intercept_ci.1, -fit.intercept_ci.0)));
        report.regressions.push(("lower_envelope".into(), fit));
    }
    report.check("displacement_at_least_t0", Some(Margin::at_most(-lower_worst, 1e-9)), "d(x, m x) >= t0");
    report.check("linear_upper_bound", Some(Margin::at_most(-upper_worst, 1e-9)), "d(x, m x) <= 2 d(x, L) + t0");
    Ok(report)
}

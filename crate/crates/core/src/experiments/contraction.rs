use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{distance_to, point_at_distance};
use crate::error::{Result, TeichError};
use crate::foliation::ThicknessCertificate;
use crate::optimize::{golden_max, golden_min};
use crate::projection::{minmax_project, Margin, ProjectionOptions};
use crate::report::{ExperimentReport, Value};
use crate::sampling::{rng_for, shoot, uniform_angle};
use crate::stats::fit_with_bootstrap;
use crate::torus::{TeichGeodesic, TeichPoint};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractionConfig {
    pub distances: Vec<f64>,
    pub b1: f64,
    /// Centres sampled per distance.
    pub sigmas_per_distance: usize,
    pub boundary_samples: usize,
    /// Base points of the centres are drawn uniformly from this range.
    pub base_range: (f64, f64),
    pub refine_extremes: bool,
    pub bootstrap: usize,
    pub seed: u64,
}

/// Projection of the sphere of radius `r` around `sigma`: `(t_min, t_max)`.
fn sphere_projection(
    sigma: &TeichPoint,
    r: f64,
    line: &TeichGeodesic,
    angles: &[f64],
    refine: bool,
    opts: &ProjectionOptions,
) -> Result<(f64, f64)> {
    let foot = |phi: f64| -> Result<(f64, f64, f64)> {
        let m = minmax_project(&shoot(sigma, phi, r), line, opts)?;
        Ok((m.t_star, m.t_mm.0, m.t_mm.1))
    };
    let mut ts = Vec::with_capacity(angles.len());
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &phi in angles {
        let (t, l, h) = foot(phi)?;
        ts.push(t);
        lo = lo.min(l);
        hi = hi.max(h);
    }
    if refine && angles.len() >= 3 {
        let n = angles.len();
        let cell = |k: usize| {
            let prev = if k == 0 { angles[n - 1] - PI } else { angles[k - 1] };
            let next = if k == n - 1 { angles[0] + PI } else { angles[k + 1] };
            (prev, next)
        };
        let t_of = |phi: f64| foot(phi).map(|f| f.0).unwrap_or(f64::NAN);
        let kmax = (0..n).max_by(|&a, &b| ts[a].total_cmp(&ts[b])).unwrap();
        let kmin = (0..n).min_by(|&a, &b| ts[a].total_cmp(&ts[b])).unwrap();
        let (a, b) = cell(kmax);
        let (ga, gb) = golden_max(t_of, a, b, 1e-12);
        let (_, _, h) = foot(0.5 * (ga + gb))?;
        hi = hi.max(h);
        let (a, b) = cell(kmin);
        let (ga, gb) = golden_min(t_of, a, b, 1e-12);
        let (_, l, _) = foot(0.5 * (ga + gb))?;
        lo = lo.min(l);
    }
    Ok((lo, hi))
}

/// Diameter of the projection of spheres of radius `d − b1` around centres
/// at distance `d` from `line`.
pub fn contraction_experiment(
    id: &str,
    line: &TeichGeodesic,
    cert: Option<&ThicknessCertificate>,
    cfg: &ContractionConfig,
    opts: &ProjectionOptions,
) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new(
        id,
        cfg.seed,
        serde_json::to_value(cfg)?,
        &["distance", "sigma_index", "t_base", "angle", "sigma_x", "sigma_y", "radius", "diam", "t_min", "t_max", "status"],
    );
    match cert {
        Some(c) if !c.covers(line) => {
            return Err(TeichError::NotCertified("certificate does not cover the geodesic".into()))
        }
        Some(c) => report.notes.push(format!("certified epsilon = {:e}", c.epsilon)),
        None => report.notes.push("uncertified contrast run".into()),
    }
    let (ba, bb) = cfg.base_range;
    let jobs: Vec<(f64, usize, u64)> = cfg
        .distances
        .iter()
        .enumerate()
        .flat_map(|(i, &d)| (0..cfg.sigmas_per_distance).map(move |j| (d, j, (i * cfg.sigmas_per_distance + j) as u64)))
        .collect();
    let rows: Vec<(Vec<Value>, Option<f64>)> = jobs
        .into_par_iter()
        .map(|(d, j, idx)| -> Result<(Vec<Value>, Option<f64>)> {
            let mut rng = rng_for(cfg.seed, idx);
            let t_base = if ba == bb { ba } else { rng.gen_range(ba..bb) };
            let angle = uniform_angle(&mut rng);
            let r = d - cfg.b1;
            if r <= 0.0 {
                let row = vec![
                    d.into(), j.into(), t_base.into(), angle.into(), f64::NAN.into(), f64::NAN.into(),
                    r.into(), f64::NAN.into(), f64::NAN.into(), f64::NAN.into(),
                    format!("skipped: d <= b1 = {}", cfg.b1).into(),
                ];
                return Ok((row, None));
            }
            let sigma = point_at_distance(line, t_base, angle, d, opts)?;
            let mut angles: Vec<f64> = (0..cfg.boundary_samples).map(|_| uniform_angle(&mut rng)).collect();
            angles.sort_by(|a, b| a.total_cmp(b));
            let (lo, hi) = sphere_projection(&sigma, r, line, &angles, cfg.refine_extremes, opts)?;
            let diam = hi - lo;
            let row = vec![
                d.into(), j.into(), t_base.into(), angle.into(), sigma.x().into(), sigma.y().into(),
                r.into(), diam.into(), lo.into(), hi.into(), "ok".into(),
            ];
            Ok((row, Some(diam)))
        })
        .collect::<Result<_>>()?;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (row, diam) in rows {
        if let (Some(diam), Value::Num(d)) = (diam, &row[0]) {
            xs.push(*d);
            ys.push(diam);
        }
        report.push_row(row);
    }
    let b2 = ys.iter().copied().fold(0.0, f64::max);
    report.fit("b2", b2, None);
    if let Some(fit) = fit_with_bootstrap(&xs, &ys, cfg.bootstrap, cfg.seed) {
        report.fit("diam_slope", fit.slope, Some(fit.slope_ci));
        report.regressions.push(("diam_vs_distance".into(), fit));
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathContraction {
    pub diam: f64,
    pub path_length: f64,
    pub min_distance: f64,
    /// The path-contraction bound; `None` when the path enters the
    /// `b1`-neighbourhood of the line.
    pub path_form: Option<Margin>,
    pub quasi_lipschitz: Margin,
}

/// Checks both projection bounds for a path from `x` to `y`.
pub fn path_contraction_check(
    line: &TeichGeodesic,
    path: &[(f64, TeichPoint)],
    b1: f64,
    b2: f64,
    b_quasi: f64,
    opts: &ProjectionOptions,
) -> Result<PathContraction> {
    let (Some(first), Some(last)) = (path.first(), path.last()) else {
        return Err(TeichError::Degenerate("empty path".into()));
    };
    let (x, y) = (first.1, last.1);
    let px = minmax_project(&x, line, opts)?;
    let py = minmax_project(&y, line, opts)?;
    let diam = px.t_mm.1.max(py.t_mm.1) - px.t_mm.0.min(py.t_mm.0);
    let length = last.0 - first.0;
    let mut r = f64::INFINITY;
    for (_, p) in path {
        r = r.min(distance_to(line, p, opts)?);
    }
    let path_form = (r > b1).then(|| Margin::at_most(diam, b2 * (length / (r - b1) + 1.0)));
    let dxy = crate::torus::teich_distance(&x, &y);
    Ok(PathContraction {
        diam,
        path_length: length,
        min_distance: r,
        path_form,
        quasi_lipschitz: Margin::at_most(diam, dxy + b_quasi),
    })
}

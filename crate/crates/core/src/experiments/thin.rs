use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::paths::ThinRegion;
use super::point_at_distance;
use crate::error::{Result, TeichError};
use crate::foliation::{intersection, MeasuredFoliation, ThicknessCertificate};
use crate::optimize::bisect_sign;
use crate::projection::{length_minimizer, minmax_project, s_alpha, Margin, ProjectionOptions};
use crate::report::{ExperimentReport, Value};
use crate::sampling::{rng_for, uniform_angle};
use crate::torus::{extremal_length, geodesic_from_qd, TeichGeodesic};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThinConfig {
    pub alpha: MeasuredFoliation,
    pub delta: f64,
    pub n_samples: usize,
    /// Flow start points lie within this distance of the line.
    pub base_spread: f64,
    #[serde(rename = "D")]
    pub d: f64,
    pub c0: f64,
    pub c1: f64,
    pub r0: f64,
    pub seed: u64,
}

/// `E₀ c1 r0 / 2`, half the largest threshold allowed by the smallness
/// condition, with `E₀ = inf_t E_t(α)`.
pub fn delta_zero(line: &TeichGeodesic, alpha: &MeasuredFoliation, c1: f64, r0: f64) -> Result<f64> {
    let e0 = infimal_length(line, alpha)?;
    Ok(0.5 * e0 * c1 * r0)
}

fn infimal_length(line: &TeichGeodesic, alpha: &MeasuredFoliation) -> Result<f64> {
    let t = length_minimizer(line, alpha, 1e-12)
        .ok_or_else(|| TeichError::EndpointClass(format!("({}, {})", alpha.a, alpha.b)))?;
    Ok(line.extremal_length_at(alpha, t))
}

/// `{t ∈ [a, b] : E_t(α) ≤ δ}` as an interval, or `None` if empty.
pub fn line_thin_interval(line: &TeichGeodesic, alpha: &MeasuredFoliation, delta: f64) -> Option<(f64, f64)> {
    let (a, b) = line.interval();
    let tm = length_minimizer(line, alpha, 1e-12)?;
    let excess = |t: f64| line.extremal_length_at(alpha, t) - delta;
    if excess(tm) > 0.0 {
        return None;
    }
    let side = |limit: f64| -> f64 {
        if excess(limit) <= 0.0 {
            return limit;
        }
        let (l, h) = if limit < tm { (limit, tm) } else { (tm, limit) };
        let (l, h) = bisect_sign(excess, l, h, 1e-13);
        if limit < tm {
            h
        } else {
            l
        }
    };
    let reach = |dir: f64, lim: f64| -> f64 {
        if lim.is_finite() {
            return lim;
        }
        let mut step = 1.0;
        while excess(tm + dir * step) <= 0.0 && step < 1e3 {
            step *= 2.0;
        }
        tm + dir * step
    };
    Some((side(reach(-1.0, a)), side(reach(1.0, b))))
}

fn is_endpoint_class(line: &TeichGeodesic, alpha: &MeasuredFoliation) -> bool {
    let qd = line.qd();
    let close = |phi: &MeasuredFoliation| intersection(alpha, phi) <= 1e-12 * alpha.norm() * phi.norm();
    close(&qd.phi_h) || close(&qd.phi_v)
}

/// Projects sampled points of `Thin(α, δ)` to `line`.
pub fn thin_projection_experiment(
    id: &str,
    line: &TeichGeodesic,
    cert: &ThicknessCertificate,
    cfg: &ThinConfig,
    opts: &ProjectionOptions,
) -> Result<ExperimentReport> {
    let alpha = cfg.alpha;
    if is_endpoint_class(line, &alpha) {
        return Err(TeichError::EndpointClass(format!(
            "({}, {}): both sides of the projection bound are infinite",
            alpha.a, alpha.b
        )));
    }
    if !cert.covers(line) {
        return Err(TeichError::NotCertified("certificate does not cover the geodesic".into()));
    }
    let region = ThinRegion::new(alpha, cfg.delta)?;
    let s = s_alpha(line, &alpha).s;
    let delta0 = delta_zero(line, &alpha, cfg.c1, cfg.r0)?;
    let mut report = ExperimentReport::new(
        id,
        cfg.seed,
        serde_json::to_value(cfg)?,
        &["sample", "t_base", "target_length", "x", "y", "t_proj", "offset"],
    );
    let (a, b) = line.interval();
    let samples: Vec<(Vec<Value>, (f64, f64), f64)> = (0..cfg.n_samples)
        .into_par_iter()
        .map(|k| -> Result<_> {
            let mut rng = rng_for(cfg.seed, k as u64);
            let t_base = rng.gen_range(a..=b);
            let rho = rng.gen_range(0.0..=cfg.base_spread);
            let angle = uniform_angle(&mut rng);
            let target = cfg.delta * (1.0 - rng.gen_range(0.0..1.0));
            let start = point_at_distance(line, t_base, angle, rho, opts)?;
            let e_start = extremal_length(&start, &alpha);
            let p = if e_start <= target {
                start
            } else {
                let flow_t = 0.5 * (e_start / target).ln();
                geodesic_from_qd(&start, &alpha, (0.0, flow_t))?.point(flow_t)
            };
            if !region.contains(&p) {
                return Err(TeichError::Assertion(format!("flowed point {p:?} left the thin region")));
            }
            let proj = minmax_project(&p, line, opts)?;
            let offset = proj.t_star - s;
            let row = vec![
                k.into(), t_base.into(), target.into(), p.x().into(), p.y().into(), proj.t_star.into(), offset.into(),
            ];
            Ok((row, proj.t_mm, offset))
        })
        .collect::<Result<_>>()?;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut worst_offset: f64 = 0.0;
    for (row, (l, h), offset) in samples {
        lo = lo.min(l);
        hi = hi.max(h);
        worst_offset = worst_offset.max(offset.abs());
        report.push_row(row);
    }
    let diam_proj = if lo <= hi { hi - lo } else { 0.0 };
    let inter = line_thin_interval(line, &alpha, cfg.delta);
    let diam_inter = inter.map_or(0.0, |(l, h)| h - l);
    report.fit("s_alpha", s, None);
    report.fit("delta0", delta0, None);
    report.fit("diam_projection", diam_proj, None);
    report.fit("diam_line_thin", diam_inter, None);
    report.fit("B_measured", diam_proj - diam_inter, None);
    report.fit("max_offset", worst_offset, None);
    if cfg.delta <= delta0 {
        report.check("projections_within_D", Some(Margin::at_most(worst_offset, cfg.d)), "|t - s_alpha| <= D");
    } else {
        report.check("projections_within_D", None, "delta above delta0; not applicable");
    }
    match inter {
        Some(_) if cfg.delta > delta0 => {
            let bound = (cfg.delta / delta0).ln() + (2.0 * cfg.c0 * cfg.c1 * cfg.r0).ln();
            report.check("interior_bound", Some(Margin::at_most(diam_inter, bound)), "log(delta/delta0) + log(2 c0 c1 r0)");
        }
        Some(_) => report.check("interior_bound", None, "delta at or below delta0; not applicable"),
        None => report.check("interior_bound", None, "L meets no point of the thin region; vacuous"),
    }
    Ok(report)
}

/// The projection diameter at `factor·δ₀` exceeds the one at `δ₀` by at
/// most `C + ½ ln factor`.
pub fn thin_growth_margin(diam_base: f64, diam_scaled: f64, c: f64, factor: f64) -> Margin {
    Margin::at_most(diam_scaled - diam_base, c + 0.5 * factor.ln())
}

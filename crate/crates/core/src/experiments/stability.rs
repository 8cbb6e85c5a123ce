use rand::Rng;
use rayon::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::paths::QuasiGeodesicPath;
use super::point_at_distance;
use crate::error::{Result, TeichError};
use crate::foliation::ThicknessCertificate;
use crate::projection::{Margin, ProjectionOptions};
use crate::report::{ExperimentReport, Value};
use crate::sampling::{rng_for, uniform_angle};
use crate::torus::{TeichGeodesic, TeichPoint};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityConfig {
    pub k: f64,
    pub delta: f64,
    pub n_paths: usize,
    /// Arclength grid per path.
    pub grid: usize,
    pub max_attempts: usize,
    /// Triangular detours: apex distance from the line in `[0, height_max]`.
    pub height_max: f64,
    /// Triangular detours: base width along the line in `[0, width_max]`.
    pub width_max: f64,
    /// Hop chains: waypoint spacing along the line.
    pub hop_spacing: f64,
    /// Hop chains: waypoint distance from the line in `[0, hop_jitter]`.
    pub hop_jitter: f64,
    pub b1: f64,
    pub b2: f64,
    pub seed: u64,
}

impl StabilityConfig {
    pub fn new(k: f64, delta: f64, n_paths: usize, b1: f64, b2: f64, seed: u64) -> Self {
        StabilityConfig {
            k,
            delta,
            n_paths,
            grid: 200,
            max_attempts: 60,
            height_max: 2.0,
            width_max: 4.0,
            hop_spacing: 1.0,
            hop_jitter: 0.5,
            b1,
            b2,
            seed,
        }
    }

    /// `(2K + 2)R + δ` with `R = max(K b2, 2 b1)`.
    pub fn proof_bound(&self) -> f64 {
        let r = (self.k * self.b2).max(2.0 * self.b1);
        (2.0 * self.k + 2.0) * r + self.delta
    }
}

fn triangle(line: &TeichGeodesic, cfg: &StabilityConfig, rng: &mut ChaCha8Rng, opts: &ProjectionOptions) -> Result<Vec<TeichPoint>> {
    let (a, b) = line.interval();
    let tm = a + rng.gen_range(0.0..1.0) * (b - a);
    let w = rng.gen_range(0.0..cfg.width_max);
    let h = rng.gen_range(0.0..cfg.height_max);
    let angle = uniform_angle(rng);
    let (l, r) = ((tm - 0.5 * w).max(a), (tm + 0.5 * w).min(b));
    let apex = point_at_distance(line, tm, angle, h, opts)?;
    Ok(vec![line.point(a), line.point(l), apex, line.point(r), line.point(b)])
}

fn hops(line: &TeichGeodesic, cfg: &StabilityConfig, rng: &mut ChaCha8Rng, opts: &ProjectionOptions) -> Result<Vec<TeichPoint>> {
    let (a, b) = line.interval();
    let n = ((b - a) / cfg.hop_spacing).ceil().max(1.0) as usize;
    let step = (b - a) / n as f64;
    let mut wps = vec![line.point(a)];
    for i in 1..n {
        let t = a + i as f64 * step + rng.gen_range(-0.25..0.25) * step;
        let rho = rng.gen_range(0.0..cfg.hop_jitter);
        let angle = uniform_angle(rng);
        wps.push(point_at_distance(line, t, angle, rho, opts)?);
    }
    wps.push(line.point(b));
    Ok(wps)
}

/// Maximal deviation from `line` of random `(K, δ)`-quasi-geodesics joining
/// its endpoints.
pub fn stability_experiment(
    id: &str,
    line: &TeichGeodesic,
    cert: &ThicknessCertificate,
    cfg: &StabilityConfig,
    opts: &ProjectionOptions,
) -> Result<ExperimentReport> {
    if !cert.covers(line) {
        return Err(TeichError::NotCertified("certificate does not cover the segment".into()));
    }
    let bound = cfg.proof_bound();
    let mut report = ExperimentReport::new(
        id,
        cfg.seed,
        serde_json::to_value(cfg)?,
        &["path_index", "kind", "attempts", "path_length", "samples", "deviation", "bound"],
    );
    let (a, b) = line.interval();
    let outcomes: Vec<(usize, Option<Vec<Value>>, f64, String)> = (0..cfg.n_paths)
        .into_par_iter()
        .map(|i| -> Result<_> {
            let kind = if i == 0 { "geodesic" } else if i % 2 == 1 { "triangle" } else { "hops" };
            let mut rejected = 0;
            for attempt in 0..cfg.max_attempts {
                let mut rng = rng_for(cfg.seed, (i * cfg.max_attempts + attempt) as u64);
                let wps = match kind {
                    "geodesic" => vec![line.point(a), line.point(b)],
                    "triangle" => triangle(line, cfg, &mut rng, opts)?,
                    _ => hops(line, cfg, &mut rng, opts)?,
                };
                let Ok(path) = QuasiGeodesicPath::from_waypoints(&wps, cfg.grid, cfg.k, cfg.delta) else {
                    rejected += 1;
                    continue;
                };
                let dev = path.max_deviation(line, opts)?;
                let row = vec![
                    i.into(), kind.into(), (attempt + 1).into(), path.length().into(), path.samples().len().into(),
                    dev.into(), bound.into(),
                ];
                return Ok((rejected, Some(row), dev, String::new()));
            }
            let note = format!("path {i}: no valid {kind} after {} attempts", cfg.max_attempts);
            Ok((rejected, None, 0.0, note))
        })
        .collect::<Result<_>>()?;
    let mut rejected = 0usize;
    let mut worst: f64 = 0.0;
    for (rej, row, dev, note) in outcomes {
        rejected += rej;
        worst = worst.max(dev);
        match row {
            Some(r) => report.push_row(r),
            None => report.notes.push(note),
        }
    }
    report.fit("max_deviation", worst, None);
    report.fit("proof_bound", bound, None);
    report.check("deviation_within_proof_bound", Some(Margin::at_most(worst, bound)), "(2K+2)R + delta, R = max(K b2, 2 b1)");
    report.notes.push(format!("rejected candidates: {rejected}"));
    Ok(report)
}

use serde::{Deserialize, Serialize};

use crate::error::{Result, TeichError};
use crate::foliation::MeasuredFoliation;
use crate::projection::ProjectionOptions;
use crate::torus::{extremal_length, geodesic_between, teich_distance, TeichPoint};
use crate::TeichGeodesic;

/// Slack added to the quasi-geodesic inequality to absorb rounding.
const QG_SLACK: f64 = 1e-9;

/// An arclength-sampled path satisfying `|s_i − s_j| ≤ K d(p_i, p_j) + δ`
/// on every pair of samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiGeodesicPath {
    samples: Vec<(f64, TeichPoint)>,
    k: f64,
    delta: f64,
}

/// Largest `|s_i − s_j| − K d(p_i, p_j)` over sample pairs: the least `δ`
/// for which the samples form a `(K, δ)`-quasi-geodesic.
pub fn quasi_geodesic_excess(samples: &[(f64, TeichPoint)], k: f64) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for i in 0..samples.len() {
        for j in i + 1..samples.len() {
            let gap = (samples[j].0 - samples[i].0).abs();
            worst = worst.max(gap - k * teich_distance(&samples[i].1, &samples[j].1));
        }
    }
    worst.max(0.0)
}

/// Arclength samples of the piecewise-geodesic path through `waypoints`:
/// a uniform grid of `grid` parameters plus every waypoint.
pub fn sample_polyline(waypoints: &[TeichPoint], grid: usize) -> Result<Vec<(f64, TeichPoint)>> {
    if waypoints.is_empty() {
        return Err(TeichError::Degenerate("path without waypoints".into()));
    }
    let mut segs = Vec::new();
    let mut starts = Vec::new();
    let mut total = 0.0;
    for w in waypoints.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let g = geodesic_between(&w[0], &w[1])?;
        starts.push(total);
        total += g.length();
        segs.push(g);
    }
    if segs.is_empty() {
        return Ok(vec![(0.0, waypoints[0])]);
    }
    let mut params: Vec<f64> = (0..grid.max(2))
        .map(|j| total * j as f64 / (grid.max(2) - 1) as f64)
        .chain(starts.iter().copied())
        .collect();
    params.sort_by(|a, b| a.total_cmp(b));
    params.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * total.max(1.0));
    let mut out = Vec::with_capacity(params.len());
    for s in params {
        let i = starts.partition_point(|&st| st <= s).saturating_sub(1);
        let local = (s - starts[i]).clamp(0.0, segs[i].length());
        out.push((s, segs[i].point(local)));
    }
    // land exactly on the final waypoint
    if let Some(last) = out.last_mut() {
        last.1 = *waypoints.last().unwrap();
    }
    Ok(out)
}

impl QuasiGeodesicPath {
    pub fn new(samples: Vec<(f64, TeichPoint)>, k: f64, delta: f64) -> Result<Self> {
        if !(k >= 1.0) || !(delta >= 0.0) {
            return Err(TeichError::Domain(format!("need K ≥ 1 and δ ≥ 0, got ({k}, {delta})")));
        }
        for w in samples.windows(2) {
            let ds = w[1].0 - w[0].0;
            let dd = teich_distance(&w[0].1, &w[1].1);
            if ds < 0.0 || (ds - dd).abs() > 1e-8 * ds.max(1.0) {
                return Err(TeichError::Domain(format!(
                    "arclength gap {ds} does not match segment length {dd}"
                )));
            }
        }
        let excess = quasi_geodesic_excess(&samples, k);
        if excess > delta + QG_SLACK {
            return Err(TeichError::Domain(format!(
                "not a ({k}, {delta})-quasi-geodesic: excess {excess}"
            )));
        }
        Ok(QuasiGeodesicPath { samples, k, delta })
    }

    pub fn from_waypoints(waypoints: &[TeichPoint], grid: usize, k: f64, delta: f64) -> Result<Self> {
        Self::new(sample_polyline(waypoints, grid)?, k, delta)
    }

    pub fn samples(&self) -> &[(f64, TeichPoint)] {
        &self.samples
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn length(&self) -> f64 {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => b.0 - a.0,
            _ => 0.0,
        }
    }

    /// `max_i d(p_i, L)`.
    pub fn max_deviation(&self, line: &TeichGeodesic, opts: &ProjectionOptions) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (_, p) in &self.samples {
            worst = worst.max(super::distance_to(line, p, opts)?);
        }
        Ok(worst)
    }

    /// `min_i d(p_i, L)`.
    pub fn min_distance(&self, line: &TeichGeodesic, opts: &ProjectionOptions) -> Result<f64> {
        let mut best = f64::INFINITY;
        for (_, p) in &self.samples {
            best = best.min(super::distance_to(line, p, opts)?);
        }
        Ok(best)
    }
}

/// Sampled Hausdorff distance between two paths.
pub fn path_hausdorff(a: &[(f64, TeichPoint)], b: &[(f64, TeichPoint)]) -> f64 {
    let one_way = |x: &[(f64, TeichPoint)], y: &[(f64, TeichPoint)]| {
        x.iter()
            .map(|(_, p)| y.iter().map(|(_, q)| teich_distance(p, q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// `Thin(α, δ) = {σ : E_σ(α) ≤ δ}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThinRegion {
    pub alpha: MeasuredFoliation,
    pub delta: f64,
}

impl ThinRegion {
    pub fn new(alpha: MeasuredFoliation, delta: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(TeichError::Domain(format!("thin-region threshold {delta} must be positive")));
        }
        Ok(ThinRegion { alpha, delta })
    }

    pub fn contains(&self, p: &TeichPoint) -> bool {
        extremal_length(p, &self.alpha) <= self.delta
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64) -> TeichPoint {
        TeichPoint::new(x, y).unwrap()
    }

    #[test]
    fn geodesic_is_one_zero_quasi_geodesic() {
        let p = QuasiGeodesicPath::from_waypoints(&[pt(0.0, 1.0), pt(2.0, 3.0)], 50, 1.0, 0.0).unwrap();
        assert!((p.length() - teich_distance(&pt(0.0, 1.0), &pt(2.0, 3.0))).abs() < 1e-12);
        assert_eq!(p.samples().len(), 50);
    }

    #[test]
    fn spike_is_rejected() {
        let wps = [pt(0.0, 1.0), pt(0.0, 5.0), pt(0.0, 1.0)];
        assert!(QuasiGeodesicPath::from_waypoints(&wps, 100, 2.0, 0.5).is_err());
        let s = sample_polyline(&wps, 100).unwrap();
        let e = quasi_geodesic_excess(&s, 2.0);
        assert!((e - 2.0 * 0.5 * 5f64.ln()).abs() < 0.05, "{e}");
    }

    #[test]
    fn bent_path_passes_with_room() {
        let wps = [pt(0.0, 1.0), pt(0.5, 1.5), pt(1.0, 1.0)];
        let p = QuasiGeodesicPath::from_waypoints(&wps, 80, 2.0, 0.5).unwrap();
        assert!(p.samples().iter().any(|(_, q)| *q == pt(0.5, 1.5)));
        assert_eq!(p.samples().last().unwrap().1, pt(1.0, 1.0));
    }

    #[test]
    fn thin_membership() {
        let t = ThinRegion::new(MeasuredFoliation::new(1.0, 0.0).unwrap(), 0.1).unwrap();
        assert!(t.contains(&pt(0.0, 10.0)));
        assert!(!t.contains(&pt(0.0, 9.0)));
        assert!(ThinRegion::new(t.alpha, 0.0).is_err());
    }
}

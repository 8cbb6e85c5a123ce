//! Reproduction harnesses for the projection theorems.
//!
//! Every experiment is a pure function of its configuration and seed. Sample
//! `k` draws from its own stream `rng_for(seed, k)`, so fan-out order never
//! affects the output.

pub mod contraction;
pub mod measure;
pub mod paths;
pub mod sharpness;
pub mod stability;
pub mod thin;
pub mod translation;

pub use contraction::{contraction_experiment, path_contraction_check, ContractionConfig, PathContraction};
pub use measure::{measure_constants, MeasureConfig};
pub use paths::{QuasiGeodesicPath, ThinRegion};
pub use sharpness::{sharpness_demo, SharpnessConfig};
pub use stability::{stability_experiment, StabilityConfig};
pub use thin::{thin_projection_experiment, ThinConfig};
pub use translation::{pa_translation_experiment, TranslationConfig};

use crate::error::{Result, TeichError};
use crate::projection::{minmax_project, ProjectionOptions};
use crate::sampling::shoot;
use crate::torus::{TeichGeodesic, TeichPoint};

/// `d(p, L)` via the Minmax solver.
pub fn distance_to(line: &TeichGeodesic, p: &TeichPoint, opts: &ProjectionOptions) -> Result<f64> {
    Ok(minmax_project(p, line, opts)?.distance)
}

/// The point at distance `d` from `line` on the geodesic ray leaving
/// `line.point(t_base)` in direction `angle`.
pub fn point_at_distance(
    line: &TeichGeodesic,
    t_base: f64,
    angle: f64,
    d: f64,
    opts: &ProjectionOptions,
) -> Result<TeichPoint> {
    let base = line.point(t_base);
    if d <= 0.0 {
        return Ok(base);
    }
    let excess = |r: f64| -> Result<f64> { Ok(distance_to(line, &shoot(&base, angle, r), opts)? - d) };
    let mut hi = d;
    while excess(hi)? < 0.0 {
        hi *= 2.0;
        if hi > 200.0 {
            return Err(TeichError::Degenerate(format!("ray at angle {angle} stays within {d} of the line")));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-13 * hi.max(1.0) || mid <= lo || mid >= hi {
            break;
        }
        if excess(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(shoot(&base, angle, 0.5 * (lo + hi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::{axis_of, MappingClass};

    #[test]
    fn sampled_points_sit_at_target_distance() {
        let (l, _) = axis_of(&MappingClass::new(2, 1, 1, 1).unwrap()).unwrap();
        let opts = ProjectionOptions::default();
        for (k, d) in [0.5, 2.0, 6.0].into_iter().enumerate() {
            let p = point_at_distance(&l, 0.3, 0.4 + k as f64, d, &opts).unwrap();
            assert!((distance_to(&l, &p, &opts).unwrap() - d).abs() < 1e-9);
        }
    }
}

//! Deterministic random streams and sampling helpers.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::foliation::MeasuredFoliation;
use crate::torus::{TeichGeodesic, TeichPoint};

/// Independent stream `index` of the generator seeded by `seed`.
pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn uniform_angle<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(0.0..PI)
}

/// The class with vertex `s` along `line`: `e^s Φ_h ± e^{−s} Φ_v`.
pub fn class_with_vertex(line: &TeichGeodesic, s: f64, positive: bool) -> MeasuredFoliation {
    let qd = line.qd();
    let (u, v) = (s.exp(), (-s).exp());
    let sign = if positive { 1.0 } else { -1.0 };
    MeasuredFoliation {
        a: u * qd.phi_h.a + sign * v * qd.phi_v.a,
        b: u * qd.phi_h.b + sign * v * qd.phi_v.b,
    }
}

/// The point at distance `r` from `from` along the geodesic leaving in
/// direction `angle` (measured in the flat structure at `from`).
pub fn shoot(from: &TeichPoint, angle: f64, r: f64) -> TeichPoint {
    let dir = from.direction_foliation(angle);
    crate::torus::geodesic_from_qd(from, &dir, (0.0, r.max(0.0)))
        .expect("unit direction is nonzero")
        .point(r)
}

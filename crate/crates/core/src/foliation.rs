//! Measured foliations on the torus.
//!
//! A measured foliation is a nonzero real pair `(a, b)`: its leaves run in the
//! direction of `a + b·τ` in the flat structure `C / (Z + Zτ)` and its
//! transverse measure is the length of that vector. Integer primitive pairs
//! are the weighted simple closed curves.

use std::cmp::Ordering;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TeichError};
use crate::torus::{extremal_length, TeichGeodesic, TeichPoint};

/// Relative tolerance used to decide that two slopes tie for the systole.
pub const SYSTOLE_TIE_TOL: f64 = 1e-12;

/// Default arclength spacing used when certifying precompactness.
pub const DEFAULT_CERTIFICATE_STEP: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFoliation")]
pub struct MeasuredFoliation {
    pub a: f64,
    pub b: f64,
}

#[derive(Deserialize)]
struct RawFoliation {
    a: f64,
    b: f64,
}

impl TryFrom<RawFoliation> for MeasuredFoliation {
    type Error = TeichError;

    fn try_from(raw: RawFoliation) -> Result<Self> {
        MeasuredFoliation::new(raw.a, raw.b)
    }
}

impl MeasuredFoliation {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(TeichError::Domain(format!("non-finite foliation ({a}, {b})")));
        }
        if a == 0.0 && b == 0.0 {
            return Err(TeichError::ZeroFoliation);
        }
        Ok(MeasuredFoliation { a, b })
    }

    /// The unit-mass representative of a direction angle.
    pub fn from_angle(theta: f64) -> Self {
        MeasuredFoliation {
            a: theta.cos(),
            b: theta.sin(),
        }
    }

    pub fn from_slope(s: SlopeCurve) -> Self {
        MeasuredFoliation {
            a: s.p as f64,
            b: s.q as f64,
        }
    }

    /// Multiplies the transverse measure by `s > 0`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(TeichError::Domain(format!("scale factor {s} must be positive")));
        }
        Ok(MeasuredFoliation {
            a: self.a * s,
            b: self.b * s,
        })
    }

    pub fn norm(&self) -> f64 {
        self.a.hypot(self.b)
    }

    pub fn class(&self) -> ProjectiveClass {
        ProjectiveClass::of(self)
    }
}

/// `det(f, g)`; its absolute value is the intersection number.
#[inline]
pub fn signed_intersection(f: &MeasuredFoliation, g: &MeasuredFoliation) -> f64 {
    f.a * g.b - f.b * g.a
}

pub fn intersection(f: &MeasuredFoliation, g: &MeasuredFoliation) -> f64 {
    signed_intersection(f, g).abs()
}

/// A primitive integer slope, normalized so that `q > 0`, or `(p, q) = (1, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SlopeCurve {
    pub p: i64,
    pub q: i64,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl SlopeCurve {
    /// Normalizes the sign; fails unless `gcd(|p|, |q|) = 1`.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if gcd(p, q) != 1 {
            return Err(TeichError::NotPrimitive(p, q));
        }
        let (p, q) = if q < 0 || (q == 0 && p < 0) { (-p, -q) } else { (p, q) };
        Ok(SlopeCurve { p, q })
    }

    /// Ordering key for systole tie-breaking: lexicographic `(q, p)`.
    fn tie_key(&self) -> (i64, i64) {
        (self.q, self.p)
    }
}

/// A point of PMF(torus), stored as the direction angle in `[0, π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectiveClass {
    pub theta: f64,
}

impl ProjectiveClass {
    pub fn new(theta: f64) -> Self {
        let mut t = theta.rem_euclid(PI);
        if t >= PI {
            t = 0.0;
        }
        ProjectiveClass { theta: t }
    }

    pub fn of(f: &MeasuredFoliation) -> Self {
        Self::new(f.b.atan2(f.a))
    }

    pub fn representative(&self) -> MeasuredFoliation {
        MeasuredFoliation::from_angle(self.theta)
    }

    /// Distance on the projective circle `R / πZ`.
    pub fn angular_distance(&self, other: &ProjectiveClass) -> f64 {
        let d = (self.theta - other.theta).rem_euclid(PI);
        d.min(PI - d)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystoleSample {
    pub t: f64,
    pub slope: SlopeCurve,
    pub value: f64,
}

/// Sampled lower-bound estimate of the thickness of a geodesic segment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThicknessCertificate {
    pub epsilon: f64,
    pub interval: (f64, f64),
    pub samples: Vec<SystoleSample>,
}

impl ThicknessCertificate {
    /// True when the certificate was produced for exactly this interval.
    pub fn covers(&self, line: &TeichGeodesic) -> bool {
        let (a, b) = line.interval();
        self.interval == (a, b) && self.epsilon > 0.0
    }
}

/// All primitive slopes with `|p|, |q| <= depth`, ordered by `(q, p)`.
pub fn slope_enumerate(depth: u32) -> Vec<SlopeCurve> {
    let n = depth as i64;
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    out.push(SlopeCurve { p: 1, q: 0 });
    for q in 1..=n {
        for p in -n..=n {
            if gcd(p, q) == 1 {
                out.push(SlopeCurve { p, q });
            }
        }
    }
    out
}

/// Shortest simple closed curve at `p` by Gauss–Lagrange reduction of the
/// lattice `Z + Zτ`.
pub fn systole(point: &TeichPoint) -> (SlopeCurve, f64) {
    let tau = point.tau();
    let vec_of = |c: (i64, i64)| c.0 as f64 + c.1 as f64 * tau;
    let mut u = (1i64, 0i64);
    let mut v = (0i64, 1i64);
    // Each pass strictly shortens a basis vector, so the loop terminates.
    for _ in 0..256 {
        let (zu, zv) = (vec_of(u), vec_of(v));
        if zv.norm_sqr() < zu.norm_sqr() {
            std::mem::swap(&mut u, &mut v);
            continue;
        }
        let mu = ((zv * zu.conj()).re / zu.norm_sqr()).round() as i64;
        if mu == 0 {
            break;
        }
        v = (v.0 - mu * u.0, v.1 - mu * u.1);
    }
    let candidates = [u, v, (u.0 + v.0, u.1 + v.1), (u.0 - v.0, u.1 - v.1)];
    let mut best: Option<(SlopeCurve, f64)> = None;
    let scored: Vec<(SlopeCurve, f64)> = candidates
        .iter()
        .filter_map(|&(p, q)| SlopeCurve::new(p, q).ok())
        .map(|s| (s, extremal_length(point, &MeasuredFoliation::from_slope(s))))
        .collect();
    let min = scored.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    for (s, e) in scored {
        if e > min * (1.0 + SYSTOLE_TIE_TOL) {
            continue;
        }
        best = match best {
            Some((bs, be)) if bs.tie_key() <= s.tie_key() => Some((bs, be)),
            _ => Some((s, e)),
        };
    }
    let (s, _) = best.expect("reduced basis always yields a candidate");
    // report the exact minimum, not the value of the tie-break winner
    (s, min)
}

/// Samples the systole along `line` at spacing `<= step`.
pub fn certify_precompact(line: &TeichGeodesic, step: f64) -> Result<ThicknessCertificate> {
    let (a, b) = line.interval();
    if !a.is_finite() || !b.is_finite() {
        return Err(TeichError::InfiniteInterval(a, b));
    }
    if !(step > 0.0) {
        return Err(TeichError::Domain(format!("certificate step {step} must be positive")));
    }
    let n = ((b - a) / step).ceil().max(0.0) as usize;
    let samples: Vec<SystoleSample> = (0..=n)
        .map(|k| {
            let t = if n == 0 { a } else { a + (b - a) * k as f64 / n as f64 };
            let (slope, value) = systole(&line.point(t));
            SystoleSample { t, slope, value }
        })
        .collect();
    let epsilon = samples
        .iter()
        .map(|s| s.value)
        .min_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal))
        .unwrap_or(f64::INFINITY);
    debug_assert!(samples.iter().all(|s| s.value >= epsilon));
    Ok(ThicknessCertificate {
        epsilon,
        interval: (a, b),
        samples,
    })
}

/// `E_p(f)·E_p(g) >= i(f, g)²` with relative slack `1e-9`.
pub fn check_length_intersection(
    point: &TeichPoint,
    f: &MeasuredFoliation,
    g: &MeasuredFoliation,
) -> bool {
    let prod = extremal_length(point, f) * extremal_length(point, g);
    let i = intersection(f, g);
    prod >= i * i - 1e-9 * prod
}

//! Teichmüller geometry of the torus in the upper half-plane model.
//!
//! A point `τ = x + iy` is the flat torus `C / (Z + Zτ)` with its marking.
//! The Teichmüller metric is half the hyperbolic metric, so every quantity
//! here has a closed form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TeichError};
use crate::foliation::{intersection, MeasuredFoliation};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawPoint")]
pub struct TeichPoint {
    x: f64,
    y: f64,
}

#[derive(Deserialize)]
struct RawPoint {
    x: f64,
    y: f64,
}

impl TryFrom<RawPoint> for TeichPoint {
    type Error = TeichError;

    fn try_from(raw: RawPoint) -> Result<Self> {
        TeichPoint::new(raw.x, raw.y)
    }
}

impl PartialEq for TeichPoint {
    fn eq(&self, other: &Self) -> bool {
        self.x.to_bits() == other.x.to_bits() && self.y.to_bits() == other.y.to_bits()
    }
}

impl Eq for TeichPoint {}

impl TeichPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() || y <= 0.0 {
            return Err(TeichError::InvalidPoint { x, y });
        }
        Ok(TeichPoint { x, y })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn tau(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    /// The foliation whose leaves make angle `theta` with the real axis in
    /// the flat structure at this point, normalized to extremal length 1.
    pub fn direction_foliation(&self, theta: f64) -> MeasuredFoliation {
        let s = self.y.sqrt();
        let b = s * theta.sin() / self.y;
        let a = s * theta.cos() - b * self.x;
        MeasuredFoliation { a, b }
    }
}

/// `E_p(f) = |a + bτ|² / Im τ`.
pub fn extremal_length(p: &TeichPoint, f: &MeasuredFoliation) -> f64 {
    let re = f.a + f.b * p.x;
    let im = f.b * p.y;
    (re * re + im * im) / p.y
}

/// `cosh(d_hyp(p, q)) − 1`, computed without cancellation.
pub fn hyperbolic_u(p: &TeichPoint, q: &TeichPoint) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    (dx * dx + dy * dy) / (2.0 * p.y * q.y)
}

/// Largest ratio `E_q(f) / E_p(f)`.
pub fn dilatation(p: &TeichPoint, q: &TeichPoint) -> f64 {
    if p == q {
        return 1.0;
    }
    let u = hyperbolic_u(p, q);
    1.0 + u + (u * (u + 2.0)).sqrt()
}

pub fn teich_distance(p: &TeichPoint, q: &TeichPoint) -> f64 {
    if p == q {
        return 0.0;
    }
    let u = hyperbolic_u(p, q);
    0.5 * (u + (u * (u + 2.0)).sqrt()).ln_1p()
}

/// Ideal boundary point of the foliation `(a, b)`: `−a/b`, or `None` for `∞`.
pub fn ideal_point(f: &MeasuredFoliation) -> Option<f64> {
    if f.b == 0.0 {
        None
    } else {
        Some(-f.a / f.b)
    }
}

/// The foliation whose ideal point is `xi` (`None` meaning `∞`).
pub fn foliation_at_ideal(xi: Option<f64>) -> MeasuredFoliation {
    match xi {
        None => MeasuredFoliation { a: 1.0, b: 0.0 },
        Some(v) => MeasuredFoliation { a: -v, b: 1.0 },
    }
}

/// Backward and forward ideal endpoints of the oriented geodesic from `p`
/// through `q`.
fn ideal_endpoints(p: &TeichPoint, q: &TeichPoint) -> (Option<f64>, Option<f64>) {
    if p.x == q.x {
        return if q.y > p.y {
            (Some(p.x), None)
        } else {
            (None, Some(p.x))
        };
    }
    let np = p.x * p.x + p.y * p.y;
    let nq = q.x * q.x + q.y * q.y;
    let c = (nq - np) / (2.0 * (q.x - p.x));
    let rho = (p.x - c).hypot(p.y);
    let (hi, lo) = if c == 0.0 {
        (rho, -rho)
    } else {
        let far = c + c.signum() * rho;
        let near = (2.0 * c * p.x - np) / far;
        if far > near {
            (far, near)
        } else {
            (near, far)
        }
    };
    if q.x > p.x {
        (Some(lo), Some(hi))
    } else {
        (Some(hi), Some(lo))
    }
}

/// The projective class realizing `dilatation(p, q)`; `None` when `p = q`.
pub fn stretch_witness(p: &TeichPoint, q: &TeichPoint) -> Option<MeasuredFoliation> {
    if p == q {
        return None;
    }
    let (back, _) = ideal_endpoints(p, q);
    Some(foliation_at_ideal(back))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMappingClass")]
pub struct MappingClass {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

#[derive(Deserialize)]
struct RawMappingClass {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl TryFrom<RawMappingClass> for MappingClass {
    type Error = TeichError;

    fn try_from(r: RawMappingClass) -> Result<Self> {
        MappingClass::new(r.a, r.b, r.c, r.d)
    }
}

impl MappingClass {
    pub const IDENTITY: MappingClass = MappingClass { a: 1, b: 0, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a * d - b * c;
        if det != 1 {
            return Err(TeichError::Determinant(det));
        }
        Ok(MappingClass { a, b, c, d })
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    pub fn inverse(&self) -> MappingClass {
        MappingClass {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// `self ∘ other` as matrices.
    pub fn compose(&self, other: &MappingClass) -> MappingClass {
        MappingClass {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn is_pseudo_anosov(&self) -> bool {
        self.trace().abs() > 2
    }
}

/// `m·τ = (aτ + b) / (cτ + d)`.
pub fn apply_mapping_class(m: &MappingClass, p: &TeichPoint) -> TeichPoint {
    let (a, b, c, d) = (m.a as f64, m.b as f64, m.c as f64, m.d as f64);
    let tau = p.tau();
    let den = c * tau + d;
    let w = (a * tau + b) / den;
    // Im(m·τ) = y / |cτ + d|² exactly; avoid the rounding of the division
    TeichPoint {
        x: w.re,
        y: p.y / den.norm_sqr(),
    }
}

/// Action on foliations compatible with [`apply_mapping_class`]:
/// `E_{m·p}(m·f) = E_p(f)`.
pub fn apply_mapping_class_f(m: &MappingClass, f: &MeasuredFoliation) -> MeasuredFoliation {
    let (a, b, c, d) = (m.a as f64, m.b as f64, m.c as f64, m.d as f64);
    MeasuredFoliation {
        a: a * f.a - b * f.b,
        b: -c * f.a + d * f.b,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticDifferentialData {
    pub phi_h: MeasuredFoliation,
    pub phi_v: MeasuredFoliation,
    pub mass: f64,
}

/// A Teichmüller geodesic `t ↦ L(t)` parametrized by signed arclength.
///
/// Along `L`, `E_t(Φ_h) = e^{−2t}` and `E_t(Φ_v) = e^{2t}`; `t → +∞` heads to
/// the ideal point of `Φ_h`.
#[derive(Clone, Debug, PartialEq)]
pub struct TeichGeodesic {
    base: TeichPoint,
    qd: QuadraticDifferentialData,
    interval: (f64, f64),
    p: Complex64,
    q: Complex64,
}

fn check_interval(interval: (f64, f64)) -> Result<()> {
    let (a, b) = interval;
    if a.is_nan() || b.is_nan() || a > b || a == f64::INFINITY || b == f64::NEG_INFINITY {
        return Err(TeichError::InvalidInterval(a, b));
    }
    Ok(())
}

/// The geodesic through `base` whose horizontal foliation is proportional to
/// `horizontal_direction`. Degenerate intervals `a = b` are allowed.
pub fn geodesic_from_qd(
    base: &TeichPoint,
    horizontal_direction: &MeasuredFoliation,
    interval: (f64, f64),
) -> Result<TeichGeodesic> {
    let mut h = MeasuredFoliation::new(horizontal_direction.a, horizontal_direction.b)?;
    check_interval(interval)?;
    let s = extremal_length(base, &h).sqrt().recip();
    h = MeasuredFoliation { a: h.a * s, b: h.b * s };
    let z_h = Complex64::new(h.a + h.b * base.x, h.b * base.y);
    let u = z_h / z_h.norm();
    let z_v = Complex64::i() * z_h;
    let d = z_v.im / base.y;
    let c = z_v.re - d * base.x;
    let phi_v = MeasuredFoliation { a: c, b: d };
    let ubar = u.conj();
    Ok(TeichGeodesic {
        base: *base,
        qd: QuadraticDifferentialData {
            phi_h: h,
            phi_v,
            mass: 1.0,
        },
        interval,
        p: base.tau() * ubar,
        q: ubar,
    })
}

/// The geodesic with `L(0) = p` and `L(d(p, q)) = q`.
pub fn geodesic_between(p: &TeichPoint, q: &TeichPoint) -> Result<TeichGeodesic> {
    if p == q {
        return Err(TeichError::Degenerate("geodesic between identical points".into()));
    }
    let (_, fwd) = ideal_endpoints(p, q);
    geodesic_from_qd(p, &foliation_at_ideal(fwd), (0.0, teich_distance(p, q)))
}

impl TeichGeodesic {
    pub fn base(&self) -> &TeichPoint {
        &self.base
    }

    pub fn qd(&self) -> &QuadraticDifferentialData {
        &self.qd
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn is_finite(&self) -> bool {
        self.interval.0.is_finite() && self.interval.1.is_finite()
    }

    pub fn length(&self) -> f64 {
        self.interval.1 - self.interval.0
    }

    pub fn with_interval(&self, interval: (f64, f64)) -> Result<TeichGeodesic> {
        check_interval(interval)?;
        Ok(TeichGeodesic {
            interval,
            ..self.clone()
        })
    }

    /// Same line, reparametrized so that the old `L(t0)` becomes `L(0)`.
    pub fn recentered(&self, t0: f64) -> Result<TeichGeodesic> {
        let (a, b) = self.interval;
        geodesic_from_qd(&self.point(t0), &self.qd.phi_h, (a - t0, b - t0))
    }

    /// `L(t)` for finite `t` (the interval is not enforced).
    pub fn point(&self, t: f64) -> TeichPoint {
        if t == 0.0 {
            return self.base;
        }
        let (p, q) = (self.p, self.q);
        let (num, den) = if t > 0.0 {
            let k = (-2.0 * t).exp();
            (Complex64::new(p.re * k, p.im), Complex64::new(q.re * k, q.im))
        } else {
            let k = (2.0 * t).exp();
            (Complex64::new(p.re, p.im * k), Complex64::new(q.re, q.im * k))
        };
        let w = num / den;
        // Im = k·y / |den|² in either scaling
        let k = (-2.0 * t.abs()).exp();
        TeichPoint {
            x: w.re,
            y: k * self.base.y / den.norm_sqr(),
        }
    }

    /// `dτ/dt` at `L(t)`.
    pub fn velocity(&self, t: f64) -> Complex64 {
        let q = self.q;
        let k = (-2.0 * t.abs()).exp();
        let den = if t >= 0.0 {
            Complex64::new(q.re * k, q.im)
        } else {
            Complex64::new(q.re, q.im * k)
        };
        2.0 * k * Complex64::new(0.0, self.base.y) / (den * den)
    }

    /// `E_{L(t)}(f)`.
    pub fn extremal_length_at(&self, f: &MeasuredFoliation, t: f64) -> f64 {
        extremal_length(&self.point(t), f)
    }

    /// `d/dt E_{L(t)}(f)`.
    pub fn extremal_length_derivative(&self, f: &MeasuredFoliation, t: f64) -> f64 {
        let p = self.point(t);
        let v = self.velocity(t);
        // E = |a + bτ|²/y: dE = (2 b Re(z̄ dτ) − E dy) / y
        let z = Complex64::new(f.a + f.b * p.x, f.b * p.y);
        let e = z.norm_sqr() / p.y;
        (2.0 * f.b * (z.conj() * v).re - e * v.im) / p.y
    }

    /// Ideal point reached as `t → +∞` (`None` is `∞`).
    pub fn forward_ideal_point(&self) -> Option<f64> {
        ideal_point(&self.qd.phi_h)
    }

    /// Ideal point reached as `t → −∞`.
    pub fn backward_ideal_point(&self) -> Option<f64> {
        ideal_point(&self.qd.phi_v)
    }

    /// `i(Φ_h, Φ_v)`; equal to 1 after normalization.
    pub fn filling_intersection(&self) -> f64 {
        intersection(&self.qd.phi_h, &self.qd.phi_v)
    }
}

/// The invariant axis of a pseudo-Anosov class and its translation length
/// `t₀ = ln λ`. The axis is parametrized over `(−∞, ∞)` and oriented so
/// that `m` translates by `+t₀`.
pub fn axis_of(m: &MappingClass) -> Result<(TeichGeodesic, f64)> {
    let tr = m.trace();
    if tr.abs() <= 2 {
        return Err(TeichError::NotPseudoAnosov(tr));
    }
    let disc = ((tr * tr - 4) as f64).sqrt();
    let c = m.c as f64;
    let amd = (m.a - m.d) as f64;
    let xi1 = (amd + disc) / (2.0 * c);
    let xi2 = (amd - disc) / (2.0 * c);
    let base = TeichPoint::new(0.5 * (xi1 + xi2), 0.5 * (xi1 - xi2).abs())?;
    let image = apply_mapping_class(m, &base);
    let line = geodesic_between(&base, &image)?.with_interval((f64::NEG_INFINITY, f64::INFINITY))?;
    let t0 = ((tr.abs() as f64 + disc) / 2.0).ln();
    Ok((line, t0))
}

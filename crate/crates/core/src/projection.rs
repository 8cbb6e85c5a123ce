//! Coarse projection of a point to a geodesic.
//!
//! Two dual problems are solved here. The Minmax problem minimizes
//! `t ↦ sup_α R_t(α)`, which is `exp 2d(σ, L(t))`, so its solution is the
//! closest-point projection. The Maxmin problem maximizes over projective
//! classes the infimum of the two-exponential approximation `r_t(α)`, whose
//! minimizer in `t` is the vertex `s_α`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TeichError};
use crate::foliation::{
    intersection, signed_intersection, MeasuredFoliation, ProjectiveClass, ThicknessCertificate,
};
use crate::optimize::{bisect_sign, golden_max, is_unimodal};
use crate::sampling::{class_with_vertex, rng_for, uniform_angle};
use crate::torus::{extremal_length, hyperbolic_u, stretch_witness, teich_distance, TeichGeodesic, TeichPoint};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionOptions {
    /// Width of the final bracket around the Minmax optimum.
    pub tol: f64,
    /// Number of multistart cells for the Maxmin search over `[0, π)`.
    pub starts: usize,
    /// Angular width of the final Maxmin bracket.
    pub theta_tol: f64,
    /// Relative gap to the maximum under which a class counts as optimal.
    pub near_optimal: f64,
    /// Excess distance defining the reported sub-level set.
    pub sublevel: f64,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        ProjectionOptions {
            tol: 1e-10,
            starts: 360,
            theta_tol: 1e-12,
            near_optimal: 1e-8,
            sublevel: 1e-8,
        }
    }
}

/// `½ (i(f,Φ_h)² e^{2t} + i(f,Φ_v)² e^{−2t})`.
pub fn e_t(line: &TeichGeodesic, f: &MeasuredFoliation, t: f64) -> f64 {
    let qd = line.qd();
    let ih = intersection(f, &qd.phi_h);
    let iv = intersection(f, &qd.phi_v);
    0.5 * (ih * ih * (2.0 * t).exp() / qd.mass + iv * iv * (-2.0 * t).exp() / qd.mass)
}

/// The minimizer `s_α` of `t ↦ e_t(α)` and the minimum value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    /// `±∞` when one intersection vanishes.
    pub s: f64,
    /// `e_{s_α}(α)`; zero in the infinite case.
    pub value: f64,
}

impl Vertex {
    pub fn is_finite(&self) -> bool {
        self.s.is_finite()
    }
}

pub fn s_alpha(line: &TeichGeodesic, f: &MeasuredFoliation) -> Vertex {
    let qd = line.qd();
    let ih = intersection(f, &qd.phi_h);
    let iv = intersection(f, &qd.phi_v);
    if ih == 0.0 {
        Vertex { s: f64::INFINITY, value: 0.0 }
    } else if iv == 0.0 {
        Vertex { s: f64::NEG_INFINITY, value: 0.0 }
    } else {
        Vertex {
            s: 0.5 * (iv / ih).ln(),
            value: ih * iv / qd.mass,
        }
    }
}

/// `½ e_{s} e^{2|t−s|} ≤ e_t ≤ 2 e_{s} e^{2|t−s|}`.
pub fn exp_envelope_check(line: &TeichGeodesic, f: &MeasuredFoliation, t: f64) -> Result<bool> {
    let v = s_alpha(line, f);
    if !v.is_finite() {
        return Err(TeichError::Inapplicable(format!("s_alpha = {} for ({}, {})", v.s, f.a, f.b)));
    }
    let env = v.value * (2.0 * (t - v.s).abs()).exp();
    let e = e_t(line, f, t);
    let slack = 1e-12 * e.max(env);
    Ok(0.5 * env <= e + slack && e <= 2.0 * env + slack)
}

/// `I_t(f, g) = i(f,g)² / (E_t(f) E_t(g))`.
pub fn intersection_ratio(line: &TeichGeodesic, f: &MeasuredFoliation, g: &MeasuredFoliation, t: f64) -> f64 {
    let p = line.point(t);
    let i = intersection(f, g);
    i * i / (extremal_length(&p, f) * extremal_length(&p, g))
}

/// Evaluators for `R_t(α) = E_t(α)/E_σ(α)` and `r_t(α) = e_t(α)/E_σ(α)`.
#[derive(Clone, Debug)]
pub struct RatioProfile<'a> {
    pub sigma: TeichPoint,
    pub line: &'a TeichGeodesic,
}

impl<'a> RatioProfile<'a> {
    pub fn new(sigma: TeichPoint, line: &'a TeichGeodesic) -> Self {
        RatioProfile { sigma, line }
    }

    pub fn big_r(&self, f: &MeasuredFoliation, t: f64) -> f64 {
        self.line.extremal_length_at(f, t) / extremal_length(&self.sigma, f)
    }

    pub fn small_r(&self, f: &MeasuredFoliation, t: f64) -> f64 {
        e_t(self.line, f, t) / extremal_length(&self.sigma, f)
    }

    /// `θ ↦ min_{t∈[a,b]} r_t(α(θ))` with its derivative, the constrained
    /// vertex and whether the vertex was clamped.
    fn maxmin_objective(&self, theta: f64) -> MaxminEval {
        let (a, b) = self.line.interval();
        let qd = self.line.qd();
        let f = MeasuredFoliation { a: theta.cos(), b: theta.sin() };
        let df = MeasuredFoliation { a: -theta.sin(), b: theta.cos() };
        let v = s_alpha(self.line, &f);
        let c = v.s.clamp(a, b);
        let clamped = c != v.s;
        let z = Complex64::new(f.a + f.b * self.sigma.x(), f.b * self.sigma.y());
        let dz = Complex64::new(df.a + df.b * self.sigma.x(), df.b * self.sigma.y());
        let big_e = z.norm_sqr() / self.sigma.y();
        let d_big_e = 2.0 * (z.conj() * dz).re / self.sigma.y();
        if !c.is_finite() {
            return MaxminEval { value: 0.0, slope: 0.0, t: c, clamped };
        }
        let (dh, dv) = (signed_intersection(&f, &qd.phi_h), signed_intersection(&f, &qd.phi_v));
        let (ddh, ddv) = (signed_intersection(&df, &qd.phi_h), signed_intersection(&df, &qd.phi_v));
        let (up, dn) = ((2.0 * c).exp(), (-2.0 * c).exp());
        let (e, de) = if clamped {
            (0.5 * (dh * dh * up + dv * dv * dn), dh * ddh * up + dv * ddv * dn)
        } else {
            // at the vertex both terms equal ½ i_h i_v
            (v.value, dh * ddh * up + dv * ddv * dn)
        };
        let e = e / qd.mass;
        let de = de / qd.mass;
        MaxminEval {
            value: e / big_e,
            slope: (de * big_e - e * d_big_e) / (big_e * big_e),
            t: c,
            clamped,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct MaxminEval {
    value: f64,
    slope: f64,
    t: f64,
    clamped: bool,
}

/// Closest-point projection of `σ` to `L`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinmaxSolution {
    pub t_star: f64,
    /// Certified enclosure of the minimizer, of width at most `tol`.
    pub t_mm: (f64, f64),
    /// `{t : d(σ, L(t)) ≤ min + sublevel}`.
    pub sublevel: (f64, f64),
    pub distance: f64,
    /// Maximizer of `E_{L(t*)}(α)/E_σ(α)`.
    pub witness: ProjectiveClass,
}

fn du_dt(sigma: &TeichPoint, line: &TeichGeodesic, t: f64) -> f64 {
    let p = line.point(t);
    let v = line.velocity(t);
    let u = hyperbolic_u(sigma, &p);
    ((p.x() - sigma.x()) * v.re + (p.y() - sigma.y()) * v.im) / (p.y() * sigma.y()) - u * v.im / p.y()
}

fn search_bracket(sigma: &TeichPoint, line: &TeichGeodesic) -> (f64, f64) {
    let (a, b) = line.interval();
    let t_ref = 0f64.clamp(a, b);
    // |t* − t_ref| ≤ d(σ, L(t_ref)) + d(σ, L(t*)) ≤ 2 d(σ, L(t_ref))
    let r = 2.0 * teich_distance(sigma, &line.point(t_ref)) + 1.0;
    (a.max(t_ref - r), b.min(t_ref + r))
}

pub fn minmax_project(sigma: &TeichPoint, line: &TeichGeodesic, opts: &ProjectionOptions) -> Result<MinmaxSolution> {
    let (a, b) = line.interval();
    let (lo, hi) = if a == b {
        (a, a)
    } else {
        let (lo, hi) = search_bracket(sigma, line);
        let n = 33;
        let grid: Vec<f64> = (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect();
        let vals: Vec<f64> = grid.iter().map(|&t| hyperbolic_u(sigma, &line.point(t))).collect();
        if !is_unimodal(&vals, 1e-12) {
            return Err(TeichError::NotQuasiConvex { lo, hi });
        }
        let k = crate::optimize::argmin(&vals);
        let (cl, ch) = (grid[k.saturating_sub(1)], grid[(k + 1).min(n - 1)]);
        let g = |t: f64| du_dt(sigma, line, t);
        let (gl, gh) = (g(cl), g(ch));
        if gl >= 0.0 {
            (cl, cl)
        } else if gh <= 0.0 {
            (ch, ch)
        } else {
            bisect_sign(g, cl, ch, opts.tol)
        }
    };
    let t_star = 0.5 * (lo + hi);
    let foot = line.point(t_star);
    let distance = teich_distance(sigma, &foot);
    let witness = stretch_witness(sigma, &foot)
        .unwrap_or(line.qd().phi_h)
        .class();
    let sublevel = sublevel_set(sigma, line, t_star, distance + opts.sublevel);
    Ok(MinmaxSolution {
        t_star,
        t_mm: (lo, hi),
        sublevel,
        distance,
        witness,
    })
}

fn sublevel_set(sigma: &TeichPoint, line: &TeichGeodesic, t_star: f64, level: f64) -> (f64, f64) {
    let (a, b) = line.interval();
    let excess = |t: f64| teich_distance(sigma, &line.point(t)) - level;
    let side = |dir: f64, limit: f64| -> f64 {
        let mut step = 1e-6;
        loop {
            let t = t_star + dir * step;
            if (dir < 0.0 && t <= limit) || (dir > 0.0 && t >= limit) {
                if excess(limit) <= 0.0 {
                    return limit;
                }
                break;
            }
            if excess(t) > 0.0 {
                break;
            }
            step *= 2.0;
        }
        let far = (t_star + dir * step).clamp(a, b);
        let (l, h) = if dir < 0.0 { (far, t_star) } else { (t_star, far) };
        let (l, h) = bisect_sign(excess, l, h, 1e-14);
        if dir < 0.0 {
            h
        } else {
            l
        }
    };
    (side(-1.0, a), side(1.0, b))
}

/// Maximizers of the Maxmin objective.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxminSolution {
    pub value: f64,
    /// Smallest-angle optimal class.
    pub witness: ProjectiveClass,
    /// All optimal classes, sorted by angle.
    pub classes: Vec<ProjectiveClass>,
    /// Constrained vertices of the optimal classes.
    pub t_tilde: Vec<f64>,
    /// Whether each vertex was clamped to an endpoint of the interval.
    pub clamped: Vec<bool>,
    /// Minimizers of `E_t(α)` over the interval for each optimal class.
    pub t_mm: Vec<f64>,
}

/// `argmin_{t∈[a,b]} E_{L(t)}(f)`, or `None` when the infimum is only
/// approached at an infinite end.
pub fn length_minimizer(line: &TeichGeodesic, f: &MeasuredFoliation, tol: f64) -> Option<f64> {
    let (a, b) = line.interval();
    if a == b {
        return Some(a);
    }
    let g = |t: f64| line.extremal_length_derivative(f, t);
    let start = 0f64.clamp(a, b);
    let lo = if a.is_finite() {
        a
    } else {
        let mut step = 1.0;
        loop {
            let t = start.min(b) - step;
            if g(t) < 0.0 {
                break t;
            }
            step *= 2.0;
            if step > 1e3 {
                return None;
            }
        }
    };
    let hi = if b.is_finite() {
        b
    } else {
        let mut step = 1.0;
        loop {
            let t = start.max(lo) + step;
            if g(t) > 0.0 {
                break t;
            }
            step *= 2.0;
            if step > 1e3 {
                return None;
            }
        }
    };
    if g(lo) >= 0.0 {
        return Some(lo);
    }
    if g(hi) <= 0.0 {
        return Some(hi);
    }
    let (l, h) = bisect_sign(g, lo, hi, tol);
    Some(0.5 * (l + h))
}

fn refine_max(profile: &RatioProfile, lo: f64, hi: f64, opts: &ProjectionOptions) -> f64 {
    let val = |th: f64| profile.maxmin_objective(th).value;
    let slope = |th: f64| profile.maxmin_objective(th).slope;
    let (gl, gh) = golden_max(val, lo, hi, 1e-6);
    let pad = 1e-6;
    let (l, h) = ((gl - pad).max(lo), (gh + pad).min(hi));
    if slope(l) > 0.0 && slope(h) < 0.0 {
        let (l, h) = bisect_sign(slope, l, h, opts.theta_tol);
        0.5 * (l + h)
    } else {
        let (l, h) = golden_max(val, gl, gh, opts.theta_tol);
        0.5 * (l + h)
    }
}

pub fn maxmin_project(sigma: &TeichPoint, line: &TeichGeodesic, opts: &ProjectionOptions) -> Result<MaxminSolution> {
    if opts.starts < 3 {
        return Err(TeichError::Domain(format!("need at least 3 starts, got {}", opts.starts)));
    }
    let profile = RatioProfile::new(*sigma, line);
    let n = opts.starts;
    let h = PI / n as f64;
    let vals: Vec<f64> = (0..n).map(|k| profile.maxmin_objective(k as f64 * h).value).collect();
    let mut found: Vec<(f64, f64)> = Vec::new();
    for k in 0..n {
        let (prev, next) = (vals[(k + n - 1) % n], vals[(k + 1) % n]);
        if vals[k] > 0.0 && vals[k] >= prev && vals[k] >= next {
            let th = refine_max(&profile, (k as f64 - 1.0) * h, (k as f64 + 1.0) * h, opts);
            let th = ProjectiveClass::new(th).theta;
            found.push((th, profile.maxmin_objective(th).value));
        }
    }
    if found.is_empty() {
        return Err(TeichError::Assertion("Maxmin objective vanishes identically".into()));
    }
    let best = found.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
    let mut optimal: Vec<f64> = found
        .into_iter()
        .filter(|c| c.1 >= best - opts.near_optimal * best.abs())
        .map(|c| c.0)
        .collect();
    optimal.sort_by(|x, y| x.total_cmp(y));
    let mut classes: Vec<ProjectiveClass> = Vec::new();
    for th in optimal {
        let c = ProjectiveClass::new(th);
        if classes.iter().all(|k| k.angular_distance(&c) > 1e-7) {
            classes.push(c);
        }
    }
    let mut t_tilde = Vec::with_capacity(classes.len());
    let mut clamped = Vec::with_capacity(classes.len());
    let mut t_mm = Vec::new();
    for c in &classes {
        let ev = profile.maxmin_objective(c.theta);
        t_tilde.push(ev.t);
        clamped.push(ev.clamped);
        if let Some(t) = length_minimizer(line, &c.representative(), opts.tol) {
            t_mm.push(t);
        }
    }
    Ok(MaxminSolution {
        value: best,
        witness: classes[0],
        classes,
        t_tilde,
        clamped,
        t_mm,
    })
}

/// Both solutions of the projection problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionResult {
    pub t_mm_interval: (f64, f64),
    pub t_mm_sublevel: (f64, f64),
    pub t_star: f64,
    #[serde(rename = "t_Mm")]
    pub t_mm_set: Vec<f64>,
    #[serde(rename = "t_tilde_Mm")]
    pub t_tilde: Vec<f64>,
    pub t_tilde_clamped: Vec<bool>,
    #[serde(rename = "witness_mM")]
    pub witness_minmax: ProjectiveClass,
    #[serde(rename = "witness_Mm")]
    pub witness_maxmin: ProjectiveClass,
    pub maxmin_value: f64,
    pub distance_to_l: f64,
}

pub fn project(sigma: &TeichPoint, line: &TeichGeodesic, opts: &ProjectionOptions) -> Result<ProjectionResult> {
    let mm = minmax_project(sigma, line, opts)?;
    let mx = maxmin_project(sigma, line, opts)?;
    Ok(ProjectionResult {
        t_mm_interval: mm.t_mm,
        t_mm_sublevel: mm.sublevel,
        t_star: mm.t_star,
        t_mm_set: mx.t_mm,
        t_tilde: mx.t_tilde,
        t_tilde_clamped: mx.clamped,
        witness_minmax: mm.witness,
        witness_maxmin: mx.witness,
        maxmin_value: mx.value,
        distance_to_l: mm.distance,
    })
}

/// Hausdorff distance between `[lo, hi]` and a finite set.
pub fn hausdorff_interval_set(interval: (f64, f64), set: &[f64]) -> f64 {
    let (lo, hi) = interval;
    if set.is_empty() {
        return f64::INFINITY;
    }
    let mut pts: Vec<f64> = set.to_vec();
    pts.sort_by(|x, y| x.total_cmp(y));
    let to_interval = pts
        .iter()
        .map(|&s| (lo - s).max(s - hi).max(0.0))
        .fold(0.0, f64::max);
    let nearest = |x: f64| pts.iter().map(|&s| (s - x).abs()).fold(f64::INFINITY, f64::min);
    let mut to_set = nearest(lo).max(nearest(hi));
    for w in pts.windows(2) {
        let (l, h) = (w[0].max(lo), w[1].min(hi));
        if l < h {
            to_set = to_set.max(nearest(0.5 * (l + h)));
        }
    }
    to_interval.max(to_set)
}

fn diameter(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo > hi {
        0.0
    } else {
        hi - lo
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Characterization {
    pub diam_mm: f64,
    #[serde(rename = "diam_Mm")]
    pub diam_maxmin: f64,
    /// Hausdorff distance between `T_mM` and `T_Mm`.
    pub gap: f64,
    /// Hausdorff distance between `T_mM` and `T̃_Mm`.
    pub gap_tilde: f64,
    pub result: ProjectionResult,
}

pub fn characterize_projection(
    sigma: &TeichPoint,
    line: &TeichGeodesic,
    opts: &ProjectionOptions,
) -> Result<Characterization> {
    let result = project(sigma, line, opts)?;
    let iv = result.t_mm_interval;
    let finite_tilde: Vec<f64> = result.t_tilde.iter().copied().filter(|t| t.is_finite()).collect();
    Ok(Characterization {
        diam_mm: iv.1 - iv.0,
        diam_maxmin: diameter(result.t_mm_set.iter().chain(finite_tilde.iter()).copied()),
        gap: hausdorff_interval_set(iv, &result.t_mm_set),
        gap_tilde: hausdorff_interval_set(iv, &finite_tilde),
        result,
    })
}

/// A checked inequality `value ≤ bound`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    pub value: f64,
    pub bound: f64,
    pub margin: f64,
    pub holds: bool,
}

impl Margin {
    pub fn at_most(value: f64, bound: f64) -> Self {
        Margin {
            value,
            bound,
            margin: bound - value,
            holds: value <= bound,
        }
    }
}

fn require_certified(line: &TeichGeodesic, cert: &ThicknessCertificate) -> Result<()> {
    if !cert.covers(line) {
        return Err(TeichError::NotCertified(format!(
            "certificate for {:?} does not cover {:?}",
            cert.interval,
            line.interval()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SandwichStats {
    pub max_ratio: f64,
    pub min_ratio: f64,
    pub samples: usize,
}

/// Empirical `max E_t/e_t` over random `(t, α)` on a certified segment.
pub fn sandwich_constant(
    line: &TeichGeodesic,
    cert: &ThicknessCertificate,
    samples: usize,
    seed: u64,
) -> Result<SandwichStats> {
    require_certified(line, cert)?;
    let (a, b) = line.interval();
    let (mut max_ratio, mut min_ratio) = (f64::NEG_INFINITY, f64::INFINITY);
    for k in 0..samples {
        let mut rng = rng_for(seed, k as u64);
        let t = if a == b { a } else { rng.gen_range(a..=b) };
        let f = MeasuredFoliation::from_angle(uniform_angle(&mut rng));
        let ratio = line.extremal_length_at(&f, t) / e_t(line, &f, t);
        max_ratio = max_ratio.max(ratio);
        min_ratio = min_ratio.min(ratio);
    }
    if min_ratio < 1.0 - 1e-12 {
        return Err(TeichError::Assertion(format!("E_t/e_t = {min_ratio} below 1")));
    }
    Ok(SandwichStats {
        max_ratio,
        min_ratio,
        samples,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanBin {
    pub gap_lo: f64,
    pub gap_hi: f64,
    pub count: usize,
    pub min_i: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntersectionScan {
    pub bins: Vec<ScanBin>,
    pub floor: f64,
    pub c1: f64,
    pub d: f64,
    pub pairs: usize,
}

/// Samples pairs of classes with vertices in the segment and records
/// `I_{s_α}(α, β)` against `|s_α − s_β|`.
///
/// The floor is the least `I` among pairs in the top decile of gaps;
/// `c1` is half of it and `D` the smallest gap beyond which every sampled
/// pair has `I ≥ c1`.
pub fn scan_distance_implies_intersection(
    line: &TeichGeodesic,
    cert: &ThicknessCertificate,
    n_pairs: usize,
    n_bins: usize,
    seed: u64,
) -> Result<IntersectionScan> {
    require_certified(line, cert)?;
    let (a, b) = line.interval();
    if a == b {
        return Err(TeichError::Degenerate("scan needs a segment of positive length".into()));
    }
    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(n_pairs);
    for k in 0..n_pairs {
        let mut rng = rng_for(seed, k as u64);
        let alpha = class_with_vertex(line, rng.gen_range(a..=b), rng.gen());
        let beta = class_with_vertex(line, rng.gen_range(a..=b), rng.gen());
        let (sa, sb) = (s_alpha(line, &alpha).s, s_alpha(line, &beta).s);
        let gap = (sa - sb).abs();
        if gap == 0.0 || !gap.is_finite() {
            continue;
        }
        pairs.push((gap, intersection_ratio(line, &alpha, &beta, sa)));
    }
    if pairs.is_empty() {
        return Err(TeichError::Degenerate("no usable pairs".into()));
    }
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.total_cmp(&y.1)));
    let top = (pairs.len() / 10).max(1);
    let floor = pairs[..top].iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let c1 = 0.5 * floor;
    let d = pairs.iter().find(|p| p.1 < c1).map(|p| p.0).unwrap_or(0.0);
    let max_gap = pairs[0].0;
    let width = max_gap / n_bins.max(1) as f64;
    let mut bins: Vec<ScanBin> = (0..n_bins.max(1))
        .map(|k| ScanBin {
            gap_lo: k as f64 * width,
            gap_hi: (k + 1) as f64 * width,
            count: 0,
            min_i: f64::INFINITY,
        })
        .collect();
    for &(gap, i) in &pairs {
        let k = ((gap / width) as usize).min(bins.len() - 1);
        bins[k].count += 1;
        bins[k].min_i = bins[k].min_i.min(i);
    }
    Ok(IntersectionScan {
        bins,
        floor,
        c1,
        d,
        pairs: pairs.len(),
    })
}

/// `R_{s_α}(f) R_{s_α}(g) ≤ 1/c1` for a pair with `|s_α − s_β| > D`.
pub fn check_product_bound(
    line: &TeichGeodesic,
    f: &MeasuredFoliation,
    g: &MeasuredFoliation,
    sigma: &TeichPoint,
    d: f64,
    c1: f64,
) -> Result<Margin> {
    let (sf, sg) = (s_alpha(line, f).s, s_alpha(line, g).s);
    if !sf.is_finite() || !sg.is_finite() || (sf - sg).abs() <= d {
        return Err(TeichError::Inapplicable(format!("vertex gap |{sf} − {sg}| does not exceed D = {d}")));
    }
    let profile = RatioProfile::new(*sigma, line);
    let lhs = profile.big_r(f, sf) * profile.big_r(g, sf);
    Ok(Margin::at_most(lhs, 1.0 / c1))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioEstimate {
    /// `exp(2 d(σ, L(s_λ))) / R_{s_λ}(λ)`.
    pub q: f64,
    pub s_lambda: f64,
    pub holds: bool,
}

/// Evaluates the ratio–distance comparison for the Maxmin witness.
pub fn check_ratio_estimates_distance(
    sigma: &TeichPoint,
    line: &TeichGeodesic,
    opts: &ProjectionOptions,
) -> Result<RatioEstimate> {
    let mx = maxmin_project(sigma, line, opts)?;
    let lambda = mx.witness.representative();
    let s = s_alpha(line, &lambda).s;
    if !s.is_finite() {
        return Err(TeichError::Inapplicable(format!("witness vertex is {s}")));
    }
    let profile = RatioProfile::new(*sigma, line);
    let q = (2.0 * teich_distance(sigma, &line.point(s))).exp() / profile.big_r(&lambda, s);
    Ok(RatioEstimate {
        q,
        s_lambda: s,
        holds: q >= 1.0 - 1e-10,
    })
}

/// `|t − s_λ| ≤ ½ ln(2 c0 c3)`.
pub fn check_vertex_chain(t: f64, s_lambda: f64, c0: f64, c3: f64) -> Margin {
    Margin::at_most((t - s_lambda).abs(), 0.5 * (2.0 * c0 * c3).ln())
}

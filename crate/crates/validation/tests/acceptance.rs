//! Acceptance suite: twelve criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary so every line is printed whether or not the
//! criterion holds; the process exits non-zero if any criterion fails.

use std::f64::consts::LN_2;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::Rng;
use teich_core::constants::EmpiricalConstants;
use teich_core::experiments::thin::{delta_zero, thin_growth_margin};
use teich_core::experiments::{
    contraction_experiment, measure_constants, pa_translation_experiment, sharpness_demo, stability_experiment,
    thin_projection_experiment, ContractionConfig, MeasureConfig, SharpnessConfig, StabilityConfig, ThinConfig,
    TranslationConfig,
};
use teich_core::report::ExperimentReport;
use teich_core::sampling::{rng_for, shoot, uniform_angle};
use teich_core::stats::fit_with_bootstrap;
use teich_core::{
    axis_of, certify_precompact, characterize_projection, check_length_intersection, e_t, exp_envelope_check,
    extremal_length, geodesic_from_qd, intersection, maxmin_project, minmax_project, s_alpha, sandwich_constant,
    slope_enumerate, teich_distance, MappingClass, MeasuredFoliation, ProjectionOptions, ProjectiveClass, SlopeCurve,
    TeichGeodesic, TeichPoint, DEFAULT_CERTIFICATE_STEP,
};

const SEED: u64 = 20_240_601;
const BOOTSTRAP: usize = 1000;

/// Largest Minmax/Maxmin Hausdorff gap seen on the characterize suite for
/// `SEED`, frozen from a reference run and rounded up.
const RECORDED_MAX_GAP: f64 = 1e-8;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn golden() -> MappingClass {
    MappingClass::new(2, 1, 1, 1).unwrap()
}

fn vertical(interval: (f64, f64)) -> TeichGeodesic {
    let base = TeichPoint::new(0.0, 1.0).unwrap();
    geodesic_from_qd(&base, &MeasuredFoliation::new(1.0, 0.0).unwrap(), interval).unwrap()
}

fn random_point<R: Rng>(rng: &mut R) -> TeichPoint {
    TeichPoint::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0f64..1.0).exp()).unwrap()
}

fn random_geodesic<R: Rng>(rng: &mut R) -> TeichGeodesic {
    let base = random_point(rng);
    let dir = MeasuredFoliation::from_angle(uniform_angle(rng));
    geodesic_from_qd(&base, &dir, (f64::NEG_INFINITY, f64::INFINITY)).unwrap()
}

// Distance oracles built on E_τ(m, n) = |m + nτ|²/y as a quadratic form in
// (m, n): the sup of E_q/E_p over directions is the top generalized
// eigenvalue of the pair of forms, and the slope oracle takes the sup over
// the Stern–Brocot nodes bracketing the top eigenvector.

fn quad(p: &TeichPoint, v: (f64, f64)) -> f64 {
    let (re, im) = (v.0 + v.1 * p.x(), v.1 * p.y());
    (re * re + im * im) / p.y()
}

/// Symmetric matrix `[[a, b], [b, c]]` of the form `E_p`.
fn form(p: &TeichPoint) -> (f64, f64, f64) {
    let (x, y) = (p.x(), p.y());
    (1.0 / y, x / y, (x * x + y * y) / y)
}

/// Top eigenvalue and eigenvector of `E_q − λ E_p`.
fn top_eigen(p: &TeichPoint, q: &TeichPoint) -> (f64, (f64, f64)) {
    let (a, b, c) = form(p);
    let (d, e, f) = form(q);
    // det(Q − λP) = (ac − b²)λ² − (af + cd − 2be)λ + (df − e²)
    let qa = a * c - b * b;
    let qb = -(a * f + c * d - 2.0 * b * e);
    let qc = d * f - e * e;
    let disc = (qb * qb - 4.0 * qa * qc).max(0.0).sqrt();
    let lambda = (-qb + disc) / (2.0 * qa);
    let (m00, m01, m11) = (d - lambda * a, e - lambda * b, f - lambda * c);
    let v = if m00.abs() + m01.abs() >= m01.abs() + m11.abs() { (-m01, m00) } else { (-m11, m01) };
    (lambda, v)
}

fn cross(u: (f64, f64), v: (f64, f64)) -> f64 {
    u.0 * v.1 - u.1 * v.0
}

/// Sup of `E_q/E_p` over the Stern–Brocot nodes of depth at most `depth`
/// on the path toward the optimal direction `z`; by unimodality of the
/// ratio on the circle no other node of that depth does better.
fn stern_brocot_sup(p: &TeichPoint, q: &TeichPoint, z: (f64, f64), depth: usize) -> f64 {
    let ratio = |v: (f64, f64)| quad(q, v) / quad(p, v);
    let z = if z.1 < 0.0 || (z.1 == 0.0 && z.0 < 0.0) { (-z.0, -z.1) } else { z };
    let (mut u, mut w) = if cross((0.0, 1.0), z) >= 0.0 { ((0.0, 1.0), (-1.0, 0.0)) } else { ((1.0, 0.0), (0.0, 1.0)) };
    let mut best = ratio(u).max(ratio(w));
    for _ in 0..depth {
        let m = (u.0 + w.0, u.1 + w.1);
        best = best.max(ratio(m));
        let side = cross(m, z);
        if side > 0.0 {
            u = m;
        } else if side < 0.0 {
            w = m;
        } else {
            break;
        }
    }
    best
}

fn enumeration_sup(p: &TeichPoint, q: &TeichPoint, slopes: &[SlopeCurve]) -> f64 {
    slopes
        .iter()
        .map(|s| {
            let v = (s.p as f64, s.q as f64);
            quad(q, v) / quad(p, v)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn c1_kerckhoff() -> Outcome {
    let slopes = slope_enumerate(200);
    let (mut worst, mut worst_plain, mut worst_eig): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for k in 0..1000 {
        let mut rng = rng_for(SEED, k);
        let p = random_point(&mut rng);
        let q = shoot(&p, uniform_angle(&mut rng), rng.gen_range(0.0..3.0));
        let d = teich_distance(&p, &q);
        let (lambda, z) = top_eigen(&p, &q);
        let oracle = 0.5 * stern_brocot_sup(&p, &q, z, 200).ln();
        let plain = 0.5 * enumeration_sup(&p, &q, &slopes).ln();
        worst = worst.max((d - oracle).abs());
        worst_plain = worst_plain.max((d - plain).abs());
        worst_eig = worst_eig.max((d - 0.5 * lambda.max(1.0).ln()).abs());
    }
    outcome(
        worst <= 1e-6,
        format!(
            "max |d - oracle| = {worst:.3e} at Stern-Brocot depth 200; |p|,|q| <= 200 enumeration {worst_plain:.3e}; \
             exact eigenvalue sup {worst_eig:.3e}"
        ),
    )
}

fn c2_length_intersection() -> Outcome {
    let mut violations = 0;
    for k in 0..100_000 {
        let mut rng = rng_for(SEED ^ 2, k);
        let p = TeichPoint::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0f64..2.0).exp()).unwrap();
        let f = MeasuredFoliation::from_angle(uniform_angle(&mut rng)).scaled(rng.gen_range(0.1..10.0)).unwrap();
        let g = MeasuredFoliation::from_angle(uniform_angle(&mut rng)).scaled(rng.gen_range(0.1..10.0)).unwrap();
        let i = intersection(&f, &g);
        let prod = quad(&p, (f.a, f.b)) * quad(&p, (g.a, g.b));
        if !check_length_intersection(&p, &f, &g) || prod < i * i * (1.0 - 1e-9) {
            violations += 1;
        }
    }
    let sq = TeichPoint::new(0.0, 1.0).unwrap();
    let (h, v) = (MeasuredFoliation::new(1.0, 0.0).unwrap(), MeasuredFoliation::new(0.0, 1.0).unwrap());
    let eq = extremal_length(&sq, &h) * extremal_length(&sq, &v) - intersection(&h, &v).powi(2);
    outcome(
        violations == 0 && eq.abs() <= 1e-15,
        format!("{violations} violations in 1e5 triples; square-torus basis excess {eq:.1e}"),
    )
}

fn c3_geodesic_laws() -> Outcome {
    let (mut worst_e, mut worst_d): (f64, f64) = (0.0, 0.0);
    for k in 0..1000 {
        let mut rng = rng_for(SEED ^ 3, k);
        let l = random_geodesic(&mut rng);
        let (s, t) = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let h = l.qd().phi_h;
        let e0 = l.extremal_length_at(&h, 0.0);
        let et = l.extremal_length_at(&h, t) * (2.0 * t).exp();
        worst_e = worst_e.max((et - e0).abs() / e0);
        let d = teich_distance(&l.point(s), &l.point(t));
        worst_d = worst_d.max((d - (s - t).abs()).abs() / (s - t).abs());
    }
    outcome(
        worst_e <= 1e-10 && worst_d <= 1e-10,
        format!("length law rel err {worst_e:.2e}, arclength rel err {worst_d:.2e}"),
    )
}

fn c4_sandwich(line: &TeichGeodesic) -> Outcome {
    let cert = certify_precompact(line, DEFAULT_CERTIFICATE_STEP).unwrap();
    let (a, b) = line.interval();
    let mut worst: f64 = f64::NEG_INFINITY;
    for k in 0..10_000 {
        let mut rng = rng_for(SEED ^ 4, k);
        let t = rng.gen_range(a..b);
        let f = MeasuredFoliation::from_angle(uniform_angle(&mut rng));
        let (e, big) = (e_t(line, &f, t), line.extremal_length_at(&f, t));
        worst = worst.max((e - big) / big);
    }
    let s1 = sandwich_constant(line, &cert, 10_000, SEED).unwrap();
    let s2 = sandwich_constant(line, &cert, 10_000, SEED + 1).unwrap();
    let rel = (s1.max_ratio - s2.max_ratio).abs() / s1.max_ratio.max(s2.max_ratio);
    outcome(
        worst <= 1e-12 && s1.max_ratio.is_finite() && rel <= 0.05,
        format!(
            "max (e_t - E_t)/E_t = {worst:.2e}; c0 = {:.12} / {:.12} across seeds (rel diff {rel:.2e})",
            s1.max_ratio, s2.max_ratio
        ),
    )
}

/// Minimizer of `t ↦ E_{L(t)}(f)` by bisection on a symmetric difference.
/// The step is wide on purpose: for `A e^{2t} + B e^{−2t}` the difference
/// `E(t + h) − E(t − h)` vanishes exactly at the minimizer for every `h`.
fn numeric_minimizer(l: &TeichGeodesic, f: &MeasuredFoliation) -> f64 {
    let e = |t: f64| extremal_length(&l.point(t), f);
    let h = 0.25;
    let (mut lo, mut hi) = (-40.0f64, 40.0f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if e(mid + h) - e(mid - h) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn c5_vertex() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut envelope_failures = 0;
    for k in 0..10_000 {
        let mut rng = rng_for(SEED ^ 5, k);
        let l = random_geodesic(&mut rng);
        let f = MeasuredFoliation::from_angle(uniform_angle(&mut rng));
        let s = s_alpha(&l, &f).s;
        worst = worst.max((s - numeric_minimizer(&l, &f)).abs());
        if !exp_envelope_check(&l, &f, rng.gen_range(-5.0..5.0)).unwrap_or(false) {
            envelope_failures += 1;
        }
    }
    outcome(
        worst <= 1e-9 && envelope_failures == 0,
        format!("max |s_alpha - numeric| = {worst:.2e}; envelope failures {envelope_failures}"),
    )
}

fn c6_worked_instance(opts: &ProjectionOptions) -> Outcome {
    let l = vertical((-2.0, 2.0));
    let sigma = TeichPoint::new(1.0, 1.0).unwrap();
    let mm = minmax_project(&sigma, &l, opts).unwrap();
    let mx = maxmin_project(&sigma, &l, opts).unwrap();
    let ch = characterize_projection(&sigma, &l, opts).unwrap();
    let dist = |t: f64| teich_distance(&sigma, &l.point(t));
    let mut t_grid = -2.0;
    let mut best = f64::INFINITY;
    for j in 0..=4_000_000 {
        let t = -2.0 + j as f64 * 1e-6;
        let v = dist(t);
        if v < best {
            best = v;
            t_grid = t;
        }
    }
    let expected = 0.25 * LN_2;
    let target = ProjectiveClass::of(&MeasuredFoliation::new(2f64.sqrt(), 1.0).unwrap());
    let witness_err = mx.witness.angular_distance(&target);
    let s_w = s_alpha(&l, &mx.witness.representative()).s;
    let w = mx.witness.representative();
    let checks = [
        (mm.t_star - expected).abs() <= 1e-8,
        (mm.t_star - t_grid).abs() <= 1e-6,
        witness_err <= 1e-8,
        (s_w - mm.t_star).abs() <= 1e-8,
        ch.gap_tilde <= 1e-6,
    ];
    outcome(
        checks.iter().all(|&c| c),
        format!(
            "t* - ln2/4 = {:.1e}, t* - grid = {:.1e}; witness ({:.6}, 1) vs (sqrt2, 1): angle err {witness_err:.3e}; \
             s_alpha - t* = {:.1e}; gap = {:.1e}",
            mm.t_star - expected,
            mm.t_star - t_grid,
            w.a / w.b,
            s_w - mm.t_star,
            ch.gap_tilde
        ),
    )
}

fn c7_characterize(line: &TeichGeodesic, t0: f64, opts: &ProjectionOptions) -> Outcome {
    let (mut ds, mut gaps) = (Vec::new(), Vec::new());
    for k in 0..500 {
        let mut rng = rng_for(SEED ^ 7, k);
        let t = rng.gen_range(0.0..t0);
        let angle = uniform_angle(&mut rng);
        let d = rng.gen_range(0.0..=5.0);
        let sigma = teich_core::experiments::point_at_distance(line, t, angle, d, opts).unwrap();
        let ch = characterize_projection(&sigma, line, opts).unwrap();
        ds.push(ch.result.distance_to_l);
        gaps.push(ch.gap);
    }
    let fit = fit_with_bootstrap(&ds, &gaps, BOOTSTRAP, SEED).unwrap();
    let max_gap = gaps.iter().copied().fold(0.0, f64::max);
    outcome(
        fit.slope_ci_contains_zero() && max_gap <= RECORDED_MAX_GAP,
        format!(
            "gap slope {:.2e} CI [{:.2e}, {:.2e}]; max gap {max_gap:.2e} (recorded {RECORDED_MAX_GAP:.0e})",
            fit.slope, fit.slope_ci.0, fit.slope_ci.1
        ),
    )
}

fn contraction_cfg(b1: f64, base_range: (f64, f64), seed: u64) -> ContractionConfig {
    ContractionConfig {
        distances: (2..=8).map(f64::from).collect(),
        b1,
        sigmas_per_distance: 10,
        boundary_samples: 32,
        base_range,
        refine_extremes: true,
        bootstrap: BOOTSTRAP,
        seed,
    }
}

fn c8_contrast(consts: &EmpiricalConstants, line: &TeichGeodesic, t0: f64, opts: &ProjectionOptions) -> Outcome {
    let cert = certify_precompact(line, DEFAULT_CERTIFICATE_STEP).unwrap();
    let b1 = consts.b1.value;
    let g = contraction_experiment("contract_golden", line, Some(&cert), &contraction_cfg(b1, (0.0, t0), SEED), opts).unwrap();
    let cusp_line = vertical((f64::NEG_INFINITY, f64::INFINITY));
    let c = contraction_experiment("contract_cusp", &cusp_line, None, &contraction_cfg(b1, (0.0, t0), SEED), opts).unwrap();
    let sharp_cfg = SharpnessConfig { t_values: vec![5.0, 10.0, 20.0], seed: SEED, ..Default::default() };
    let s = sharpness_demo("sharpness", &cusp_line, SlopeCurve::new(1, 0).unwrap(), &sharp_cfg, opts).unwrap();
    let gf = g.regression("diam_vs_distance").unwrap();
    let cf = c.regression("diam_vs_distance").unwrap();
    let sf = s.regression("deviation_vs_T").unwrap();
    let parts = [gf.slope_ci_contains_zero(), cf.slope_ci_excludes_zero_positive(), sf.slope >= 0.4];
    outcome(
        parts.iter().all(|&p| p),
        format!(
            "golden slope {:.2e} CI [{:.2e}, {:.2e}] contains 0: {}; cusp slope {:.2e} CI [{:.2e}, {:.2e}] positive: {}; \
             sharpness slope {:.2e} (c = {}) >= 0.4: {}; detour deviations {:?}",
            gf.slope, gf.slope_ci.0, gf.slope_ci.1, parts[0], cf.slope, cf.slope_ci.0, cf.slope_ci.1, parts[1],
            sf.slope, sharp_cfg.c, parts[2],
            s.column("max_dev").iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>()
        ),
    )
}

fn c9_stability(consts: &EmpiricalConstants, opts: &ProjectionOptions) -> Outcome {
    let (axis, _) = axis_of(&golden()).unwrap();
    let mut devs = Vec::new();
    let mut within = true;
    let mut bound = 0.0;
    for len in [10.0, 20.0] {
        let seg = axis.with_interval((0.0, len)).unwrap();
        let cert = certify_precompact(&seg, DEFAULT_CERTIFICATE_STEP).unwrap();
        let cfg = StabilityConfig::new(2.0, 0.5, 100, consts.b1.value, consts.b2.value, SEED);
        bound = cfg.proof_bound();
        let r = stability_experiment("stability", &seg, &cert, &cfg, opts).unwrap();
        within &= r.all_checks_hold();
        devs.push(r.fitted("max_deviation").unwrap());
    }
    let rel = (devs[0] - devs[1]).abs() / devs[0].max(devs[1]);
    outcome(
        rel < 0.1 && within,
        format!(
            "max deviation {:.4} (length 10) vs {:.4} (length 20), rel diff {rel:.3}; proof bound {bound:.3}",
            devs[0], devs[1]
        ),
    )
}

fn c10_thin(consts: &EmpiricalConstants, line: &TeichGeodesic, opts: &ProjectionOptions) -> Outcome {
    let cert = certify_precompact(line, DEFAULT_CERTIFICATE_STEP).unwrap();
    let alpha = MeasuredFoliation::from_slope(SlopeCurve::new(1, 1).unwrap());
    let d0 = delta_zero(line, &alpha, consts.c1.value, consts.r0.value).unwrap();
    let cfg = |delta: f64| ThinConfig {
        alpha,
        delta,
        n_samples: 500,
        base_spread: 1.0,
        d: consts.d.value,
        c0: consts.c0.value,
        c1: consts.c1.value,
        r0: consts.r0.value,
        seed: SEED,
    };
    let base = thin_projection_experiment("thin", line, &cert, &cfg(d0), opts).unwrap();
    let wide = thin_projection_experiment("thin_wide", line, &cert, &cfg(10.0 * d0), opts).unwrap();
    let (p0, p1) = (base.fitted("diam_projection").unwrap(), wide.fitted("diam_projection").unwrap());
    let growth = thin_growth_margin(p0, p1, consts.c.value, 10.0);
    let within_d = base.all_checks_hold();
    outcome(
        within_d && growth.holds,
        format!(
            "delta0 = {d0:.4e}; max |t - s_alpha| = {:.3e} <= D = {:.4}: {within_d}; diam {p0:.3e} -> {p1:.3e}, growth margin {:.4}",
            base.fitted("max_offset").unwrap(),
            consts.d.value,
            growth.margin
        ),
    )
}

fn c11_translation(opts: &ProjectionOptions) -> Outcome {
    let cfg = TranslationConfig {
        mapping: golden(),
        distances: (0..=8).map(f64::from).collect(),
        n_per_distance: 20,
        bootstrap: BOOTSTRAP,
        seed: SEED,
    };
    let r = pa_translation_experiment("pa-translation", &cfg, opts).unwrap();
    let t0_expected = ((3.0 + 5f64.sqrt()) / 2.0).ln();
    let on_axis = r
        .column("distance")
        .into_iter()
        .zip(r.column("displacement"))
        .filter(|(d, _)| *d == 0.0)
        .map(|(_, disp)| (disp - t0_expected).abs())
        .fold(0.0, f64::max);
    let fit = r.regression("lower_envelope").unwrap();
    let upper = r.checks.iter().find(|c| c.name == "linear_upper_bound").unwrap().holds();
    outcome(
        on_axis <= 1e-6 && fit.slope_ci_excludes_zero_positive() && upper,
        format!(
            "on-axis error {on_axis:.1e}; c0 = {:.4} CI [{:.4}, {:.4}]; upper bound holds: {upper}",
            fit.slope, fit.slope_ci.0, fit.slope_ci.1
        ),
    )
}

fn small_runs(opts: &ProjectionOptions) -> Vec<ExperimentReport> {
    let mut mcfg = MeasureConfig::new(golden(), SEED);
    mcfg.periods = 3.0;
    mcfg.sandwich_samples = 500;
    mcfg.scan_pairs = 300;
    mcfg.sigmas = 20;
    mcfg.ell0_samples = 200;
    mcfg.contraction_distances = vec![2.0, 3.0];
    mcfg.contraction_sigmas = 2;
    mcfg.boundary_samples = 8;
    mcfg.bootstrap = 50;
    let (consts, measure) = measure_constants(&mcfg, opts).unwrap();
    let (line, t0) = mcfg.segment().unwrap();
    let cert = certify_precompact(&line, DEFAULT_CERTIFICATE_STEP).unwrap();
    let mut ccfg = contraction_cfg(consts.b1.value, (0.0, t0), SEED);
    ccfg.sigmas_per_distance = 2;
    ccfg.bootstrap = 50;
    let contract = contraction_experiment("contract", &line, Some(&cert), &ccfg, opts).unwrap();
    let short = line.with_interval((0.0, 4.0)).unwrap();
    let short_cert = certify_precompact(&short, DEFAULT_CERTIFICATE_STEP).unwrap();
    let scfg = StabilityConfig::new(2.0, 0.5, 4, consts.b1.value, consts.b2.value, SEED);
    let stability = stability_experiment("stability", &short, &short_cert, &scfg, opts).unwrap();
    let alpha = MeasuredFoliation::from_slope(SlopeCurve::new(1, 1).unwrap());
    let tcfg = ThinConfig {
        alpha,
        delta: delta_zero(&line, &alpha, consts.c1.value, consts.r0.value).unwrap(),
        n_samples: 30,
        base_spread: 1.0,
        d: consts.d.value,
        c0: consts.c0.value,
        c1: consts.c1.value,
        r0: consts.r0.value,
        seed: SEED,
    };
    let thin = thin_projection_experiment("thin", &line, &cert, &tcfg, opts).unwrap();
    let pcfg = TranslationConfig { mapping: golden(), distances: vec![0.0, 1.0, 2.0], n_per_distance: 5, bootstrap: 50, seed: SEED };
    let pa = pa_translation_experiment("pa-translation", &pcfg, opts).unwrap();
    let shcfg = SharpnessConfig { t_values: vec![0.0, 2.0, 4.0], bootstrap: 50, grid: 60, seed: SEED, ..Default::default() };
    let sharp = sharpness_demo("sharpness", &vertical((f64::NEG_INFINITY, f64::INFINITY)), SlopeCurve::new(1, 0).unwrap(), &shcfg, opts).unwrap();
    vec![measure, contract, stability, thin, pa, sharp]
}

fn c12_determinism(opts: &ProjectionOptions) -> Outcome {
    let first = small_runs(opts);
    let second = small_runs(opts);
    let mut differing = Vec::new();
    for (a, b) in first.iter().zip(&second) {
        if a.csv_string().unwrap() != b.csv_string().unwrap() {
            differing.push(a.experiment.clone());
        }
    }
    outcome(
        differing.is_empty(),
        format!("{} experiments re-run; differing CSV: {:?}", first.len(), differing),
    )
}

fn main() {
    let opts = ProjectionOptions::default();
    let start = Instant::now();
    let mcfg = MeasureConfig::new(golden(), SEED);
    let (consts, _) = measure_constants(&mcfg, &opts).expect("constants run");
    let (segment, t0) = mcfg.segment().unwrap();
    println!(
        "measured constants: c0 = {:.6}, c1 = {:.6}, c3 = {:.6}, D = {:.6}, r0 = {:.6}, b1 = {:.6}, b2 = {:.6}, C = {:.6}",
        consts.c0.value, consts.c1.value, consts.c3.value, consts.d.value, consts.r0.value, consts.b1.value,
        consts.b2.value, consts.c.value
    );

    type Criterion<'a> = (&'a str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("Kerckhoff oracle agreement", Box::new(c1_kerckhoff)),
        ("length-intersection inequality", Box::new(c2_length_intersection)),
        ("geodesic laws", Box::new(c3_geodesic_laws)),
        ("sandwich bounds", Box::new(|| c4_sandwich(&segment))),
        ("vertex closed form", Box::new(c5_vertex)),
        ("worked projection instance", Box::new(|| c6_worked_instance(&opts))),
        ("characterize-projection suite", Box::new(|| c7_characterize(&segment, t0, &opts))),
        ("contraction vs sharpness contrast", Box::new(|| c8_contrast(&consts, &segment, t0, &opts))),
        ("stability of quasi-geodesics", Box::new(|| c9_stability(&consts, &opts))),
        ("thin projections", Box::new(|| c10_thin(&consts, &segment, &opts))),
        ("pseudo-Anosov translation", Box::new(|| c11_translation(&opts))),
        ("determinism", Box::new(|| c12_determinism(&opts))),
    ];

    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !o.pass {
            failed += 1;
        }
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {:>2}. {name}: {} ({:.1}s)", i + 1, o.detail, t.elapsed().as_secs_f64());
    }
    println!(
        "acceptance: {} passed, {failed} failed ({:.1}s)",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

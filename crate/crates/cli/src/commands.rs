use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use teich_core::constants::{EmpiricalConstants, CONSTANTS_FILE};
use teich_core::experiments::thin::delta_zero;
use teich_core::experiments::{
    contraction_experiment, measure_constants, pa_translation_experiment, sharpness_demo, stability_experiment,
    thin_projection_experiment, ContractionConfig, MeasureConfig, SharpnessConfig, StabilityConfig, ThinConfig,
    TranslationConfig,
};
use teich_core::report::{format_float, ExperimentReport, ARTIFACT_VERSION};
use teich_core::{
    certify_precompact, characterize_projection, extremal_length, slope_enumerate, stretch_witness, teich_distance,
    dilatation, MappingClass, MeasuredFoliation, ProjectionOptions, SlopeCurve, TeichGeodesic, TeichPoint,
    DEFAULT_CERTIFICATE_STEP,
};

use crate::config::{build_geodesic, point, GeodesicSpec, RunConfig};
use crate::Failure;

pub const EXPERIMENTS: [&str; 6] = ["contract", "stability", "thin", "pa-translation", "sharpness", "constants"];
pub const DEFAULT_DEPTH: u32 = 50;
const GOLDEN: [i64; 4] = [2, 1, 1, 1];

fn runtime(e: teich_core::TeichError) -> Failure {
    Failure::Runtime(e.into())
}

fn options(cfg: &RunConfig) -> ProjectionOptions {
    let mut o = ProjectionOptions::default();
    if let Some(t) = cfg.tol {
        o.tol = t;
    }
    o
}

/// The enumerated slope with the largest ratio `E_q/E_p`.
fn best_slope(p: &TeichPoint, q: &TeichPoint, depth: u32) -> (SlopeCurve, f64) {
    slope_enumerate(depth)
        .into_iter()
        .map(|s| {
            let f = MeasuredFoliation::from_slope(s);
            (s, extremal_length(q, &f) / extremal_length(p, &f))
        })
        .fold(None, |best: Option<(SlopeCurve, f64)>, c| match best {
            Some(b) if b.1 >= c.1 => Some(b),
            _ => Some(c),
        })
        .expect("enumeration is never empty")
}

pub fn distance(coords: [f64; 4], depth: Option<u32>) -> Result<(), Failure> {
    let p = point("p", [coords[0], coords[1]])?;
    let q = point("q", [coords[2], coords[3]])?;
    let d = teich_distance(&p, &q);
    println!("d = {d:.6} ({})", format_float(d));
    println!("K = {}", format_float(dilatation(&p, &q)));
    match stretch_witness(&p, &q) {
        Some(w) => println!(
            "witness = ({}, {}), angle {}",
            format_float(w.a + 0.0),
            format_float(w.b + 0.0),
            format_float(w.class().theta)
        ),
        None => println!("witness = none (p = q)"),
    }
    let depth = depth.unwrap_or(DEFAULT_DEPTH);
    let (s, ratio) = best_slope(&p, &q, depth);
    println!(
        "best slope {}/{} at depth {depth}: d = {}",
        s.p,
        s.q,
        format_float(0.5 * ratio.max(1.0).ln())
    );
    Ok(())
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), Failure> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display())).map_err(Failure::Runtime)?;
    }
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Runtime(e.into()))?;
    fs::write(path, text + "\n")
        .with_context(|| format!("writing {}", path.display()))
        .map_err(Failure::Runtime)
}

pub fn project(cfg: &RunConfig) -> Result<(), Failure> {
    let spec = cfg.require("geodesic", &cfg.geodesic)?;
    let sigma = point("sigma", *cfg.require("sigma", &cfg.sigma)?)?;
    let line = build_geodesic(spec, cfg.interval, None)?;
    let ch = characterize_projection(&sigma, &line, &options(cfg)).map_err(runtime)?;
    let doc = serde_json::json!({
        "version": ARTIFACT_VERSION,
        "seed": cfg.seed(),
        "config": cfg,
        "characterization": ch,
    });
    let path = cfg.out_dir().join("projection.json");
    write_json(&path, &doc)?;
    println!("t* = {:.6} ({})", ch.result.t_star, format_float(ch.result.t_star));
    println!("diam_mM = {}", format_float(ch.diam_mm));
    println!("diam_Mm = {}", format_float(ch.diam_maxmin));
    println!("gap = {}", format_float(ch.gap));
    println!("wrote {}", path.display());
    Ok(())
}

fn constants_path(cfg: &RunConfig) -> PathBuf {
    cfg.out_dir().join(CONSTANTS_FILE)
}

fn load_constants(cfg: &RunConfig) -> Result<(EmpiricalConstants, MeasureConfig), Failure> {
    let path = constants_path(cfg);
    if !path.exists() {
        return Err(Failure::Usage(format!(
            "no constants at {}; measure constants first with `teich run constants`",
            path.display()
        )));
    }
    let c = EmpiricalConstants::load(&path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let m: MeasureConfig = serde_json::from_value(c.config.clone())
        .map_err(|e| Failure::Usage(format!("{}: config: {e}", path.display())))?;
    Ok((c, m))
}

/// The configured geodesic, or the certified segment the constants were
/// measured on.
fn line_or_segment(cfg: &RunConfig, measured: &MeasureConfig) -> Result<TeichGeodesic, Failure> {
    match &cfg.geodesic {
        Some(spec) => build_geodesic(spec, cfg.interval, None),
        None => Ok(measured.segment().map_err(runtime)?.0),
    }
}

fn mapping_or_golden(cfg: &RunConfig) -> Result<MappingClass, Failure> {
    match cfg.mapping()? {
        Some(m) => Ok(m),
        None if cfg.geodesic.is_none() => Ok(MappingClass::new(GOLDEN[0], GOLDEN[1], GOLDEN[2], GOLDEN[3]).expect("unimodular")),
        None => Err(Failure::Usage("geodesic must be an `axis` for this experiment".into())),
    }
}

fn emit(cfg: &RunConfig, mut report: ExperimentReport, x: &str, y: &str) -> Result<(), Failure> {
    report.config = serde_json::json!({ "run": cfg, "experiment": report.config });
    let files = report.write_all(&cfg.out_dir(), x, y).map_err(runtime)?;
    for f in &report.fits {
        match f.ci {
            Some((lo, hi)) => println!("{} = {} [{}, {}]", f.name, format_float(f.estimate), format_float(lo), format_float(hi)),
            None => println!("{} = {}", f.name, format_float(f.estimate)),
        }
    }
    for c in &report.checks {
        let status = if c.holds() { "PASS" } else { "FAIL" };
        match &c.margin {
            Some(m) => println!("{status} {}: margin {}", c.name, format_float(m.margin)),
            None => println!("{status} {}: {}", c.name, c.note),
        }
    }
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

pub fn run(cfg: &RunConfig) -> Result<(), Failure> {
    let name = cfg.require("experiment", &cfg.experiment)?.as_str();
    let opts = options(cfg);
    let seed = cfg.seed();
    match name {
        "constants" => {
            let m = mapping_or_golden(cfg)?;
            let mcfg = MeasureConfig::new(m, seed);
            let (consts, report) = measure_constants(&mcfg, &opts).map_err(runtime)?;
            let path = constants_path(cfg);
            consts.save(&path).map_err(runtime)?;
            println!("wrote {}", path.display());
            emit(cfg, report, "name", "value")
        }
        "contract" => {
            let (consts, measured) = load_constants(cfg)?;
            let line = line_or_segment(cfg, &measured)?;
            let cert = if line.is_finite() {
                Some(certify_precompact(&line, DEFAULT_CERTIFICATE_STEP).map_err(runtime)?)
            } else {
                None
            };
            let t0 = match cfg.mapping()? {
                Some(m) => teich_core::axis_of(&m).map_err(runtime)?.1,
                None if cfg.geodesic.is_none() => measured.segment().map_err(runtime)?.1,
                None => 0.0,
            };
            let ccfg = ContractionConfig {
                distances: cfg.distances.clone().unwrap_or_else(|| (2..=8).map(f64::from).collect()),
                b1: consts.b1.value,
                sigmas_per_distance: cfg.samples.unwrap_or(20),
                boundary_samples: 32,
                base_range: (0.0, t0),
                refine_extremes: true,
                bootstrap: cfg.bootstrap.unwrap_or(1000),
                seed,
            };
            let report = contraction_experiment("contract", &line, cert.as_ref(), &ccfg, &opts).map_err(runtime)?;
            emit(cfg, report, "distance", "diam")
        }
        "stability" => {
            let (consts, _) = load_constants(cfg)?;
            let spec = cfg.geodesic.clone().unwrap_or(GeodesicSpec::Axis(GOLDEN));
            let line = build_geodesic(&spec, cfg.interval, Some((0.0, 10.0)))?;
            let cert = certify_precompact(&line, DEFAULT_CERTIFICATE_STEP).map_err(runtime)?;
            let scfg = StabilityConfig::new(
                cfg.k.unwrap_or(2.0),
                cfg.delta.unwrap_or(0.5),
                cfg.samples.unwrap_or(40),
                consts.b1.value,
                consts.b2.value,
                seed,
            );
            let report = stability_experiment("stability", &line, &cert, &scfg, &opts).map_err(runtime)?;
            emit(cfg, report, "path_index", "deviation")
        }
        "thin" => {
            let (consts, measured) = load_constants(cfg)?;
            let line = line_or_segment(cfg, &measured)?;
            let cert = certify_precompact(&line, DEFAULT_CERTIFICATE_STEP).map_err(runtime)?;
            let [p, q] = cfg.slope.unwrap_or([1, 1]);
            let slope = SlopeCurve::new(p, q).map_err(|e| Failure::Usage(format!("slope: {e}")))?;
            let alpha = MeasuredFoliation::from_slope(slope);
            let delta = match cfg.delta {
                Some(d) => d,
                None => {
                    let d0 = delta_zero(&line, &alpha, consts.c1.value, consts.r0.value).map_err(runtime)?;
                    d0 * cfg.delta_factor.unwrap_or(1.0)
                }
            };
            let tcfg = ThinConfig {
                alpha,
                delta,
                n_samples: cfg.samples.unwrap_or(500),
                base_spread: 1.0,
                d: consts.d.value,
                c0: consts.c0.value,
                c1: consts.c1.value,
                r0: consts.r0.value,
                seed,
            };
            let report = thin_projection_experiment("thin", &line, &cert, &tcfg, &opts).map_err(runtime)?;
            emit(cfg, report, "t_base", "offset")
        }
        "pa-translation" => {
            let m = mapping_or_golden(cfg)?;
            let tcfg = TranslationConfig {
                mapping: m,
                distances: cfg.distances.clone().unwrap_or_else(|| (0..=8).map(f64::from).collect()),
                n_per_distance: cfg.samples.unwrap_or(20),
                bootstrap: cfg.bootstrap.unwrap_or(1000),
                seed,
            };
            let report = pa_translation_experiment("pa-translation", &tcfg, &opts).map_err(runtime)?;
            emit(cfg, report, "measured_distance", "displacement")
        }
        "sharpness" => {
            let spec = cfg.geodesic.clone().unwrap_or(GeodesicSpec::Base { point: [0.0, 1.0], direction: [1.0, 0.0] });
            let line = build_geodesic(&spec, cfg.interval, None)?;
            let [p, q] = cfg.slope.unwrap_or([1, 0]);
            let slope = SlopeCurve::new(p, q).map_err(|e| Failure::Usage(format!("slope: {e}")))?;
            let mut scfg = SharpnessConfig { seed, ..Default::default() };
            if let Some(t) = &cfg.t_values {
                scfg.t_values = t.clone();
            }
            if let Some(c) = cfg.c {
                scfg.c = c;
            }
            if let Some(k) = cfg.k {
                scfg.k = k;
            }
            if let Some(b) = cfg.bootstrap {
                scfg.bootstrap = b;
            }
            let report = sharpness_demo("sharpness", &line, slope, &scfg, &opts).map_err(runtime)?;
            emit(cfg, report, "T", "max_dev")
        }
        other => Err(Failure::Usage(format!(
            "unknown experiment `{other}`; valid names: {}",
            EXPERIMENTS.join(", ")
        ))),
    }
}

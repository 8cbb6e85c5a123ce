//! Run configuration: a single JSON document, overridden field by field by
//! command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use teich_core::{axis_of, geodesic_between, geodesic_from_qd, MappingClass, MeasuredFoliation, TeichGeodesic, TeichPoint};

use crate::Failure;

pub const OUT_DIR_ENV: &str = "TEICH_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "teich_out";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GeodesicSpec {
    /// Invariant axis of `[[a, b], [c, d]]`.
    Axis([i64; 4]),
    /// The geodesic from `p` through `q`.
    Endpoints { p: [f64; 2], q: [f64; 2] },
    /// The geodesic through `point` stretching the foliation `direction`.
    Base { point: [f64; 2], direction: [f64; 2] },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geodesic: Option<GeodesicSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    /// Per-experiment sample count: centres, paths, or thin points.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distances: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Thin projections: threshold as a multiple of the measured `δ₀`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_factor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope: Option<[i64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_values: Option<Vec<f64>>,
    /// Additive constant of the sharpness detours.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bootstrap: Option<usize>,
}

/// Values given on the command line; every field set here wins over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub depth: Option<u32>,
    pub tol: Option<f64>,
    pub axis: Option<[i64; 4]>,
    pub experiment: Option<String>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("invalid config {}: {e}", path.display())))
    }

    pub fn apply(mut self, o: &Overrides) -> Self {
        if o.seed.is_some() {
            self.seed = o.seed;
        }
        if o.out.is_some() {
            self.out = o.out.clone();
        }
        if o.depth.is_some() {
            self.depth = o.depth;
        }
        if o.tol.is_some() {
            self.tol = o.tol;
        }
        if let Some(m) = o.axis {
            self.geodesic = Some(GeodesicSpec::Axis(m));
        }
        if o.experiment.is_some() {
            self.experiment = o.experiment.clone();
        }
        self
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    /// `--out` or config, then the environment, then the built-in default.
    pub fn out_dir(&self) -> PathBuf {
        self.out
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
    }

    pub fn require<'a, T>(&self, field: &str, value: &'a Option<T>) -> Result<&'a T, Failure> {
        value
            .as_ref()
            .ok_or_else(|| Failure::Usage(format!("missing config field `{field}`")))
    }

    pub fn mapping(&self) -> Result<Option<MappingClass>, Failure> {
        match &self.geodesic {
            Some(GeodesicSpec::Axis([a, b, c, d])) => MappingClass::new(*a, *b, *c, *d)
                .map(Some)
                .map_err(|e| Failure::Usage(format!("geodesic.axis: {e}"))),
            _ => Ok(None),
        }
    }
}

pub fn point(field: &str, v: [f64; 2]) -> Result<TeichPoint, Failure> {
    TeichPoint::new(v[0], v[1]).map_err(|e| Failure::Usage(format!("{field}: {e}")))
}

/// Builds the geodesic; `default_interval` applies when the config has none.
pub fn build_geodesic(
    spec: &GeodesicSpec,
    interval: Option<(f64, f64)>,
    default_interval: Option<(f64, f64)>,
) -> Result<TeichGeodesic, Failure> {
    let invalid = |e: teich_core::TeichError| Failure::Usage(format!("geodesic: {e}"));
    let line = match spec {
        GeodesicSpec::Axis([a, b, c, d]) => {
            let m = MappingClass::new(*a, *b, *c, *d).map_err(invalid)?;
            axis_of(&m).map_err(invalid)?.0
        }
        GeodesicSpec::Endpoints { p, q } => {
            geodesic_between(&point("geodesic.p", *p)?, &point("geodesic.q", *q)?).map_err(invalid)?
        }
        GeodesicSpec::Base { point: p, direction } => {
            let f = MeasuredFoliation::new(direction[0], direction[1]).map_err(invalid)?;
            geodesic_from_qd(&point("geodesic.point", *p)?, &f, (f64::NEG_INFINITY, f64::INFINITY)).map_err(invalid)?
        }
    };
    match interval.or(default_interval) {
        Some(iv) => line.with_interval(iv).map_err(invalid),
        None => Ok(line),
    }
}

//! Measured stand-ins for the non-constructive constants, with provenance.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TeichError};
use crate::report::ARTIFACT_VERSION;

pub const CONSTANTS_FORMAT_VERSION: u32 = 1;
pub const CONSTANTS_FILE: &str = "constants.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub experiment: String,
    pub sample_size: usize,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measured {
    pub value: f64,
    pub provenance: Provenance,
}

impl Measured {
    pub fn new(value: f64, experiment: &str, sample_size: usize, note: &str) -> Self {
        Measured {
            value,
            provenance: Provenance {
                experiment: experiment.to_string(),
                sample_size,
                note: note.to_string(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalConstants {
    pub format_version: u32,
    pub artifact_version: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub epsilon: Measured,
    pub c0: Measured,
    pub c1: Measured,
    pub c3: Measured,
    pub c4: Measured,
    pub c5: Measured,
    #[serde(rename = "D")]
    pub d: Measured,
    pub r0: Measured,
    pub ell0: Measured,
    pub b0: Measured,
    pub b1: Measured,
    pub b2: Measured,
    #[serde(rename = "B")]
    pub b: Measured,
    /// `B` before flooring to a positive value.
    #[serde(rename = "B_raw")]
    pub b_raw: f64,
    #[serde(rename = "C")]
    pub c: Measured,
}

/// Constants that follow from the measured ones by the proof formulas.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Derived {
    pub r0: f64,
    pub c4: f64,
    pub c5: f64,
    pub c: f64,
    pub b1: f64,
}

/// `r0 = ε/(ℓ0 c0)`, `c4 = ½ ln(2/(c1 r0²))`, `c5 = ½ ln(2 c0 c3)`,
/// `C = ½ ln(c3² c0/c1)` and `b1 = C`, which exceeds `C/2`.
pub fn derive(epsilon: f64, ell0: f64, c0: f64, c1: f64, c3: f64) -> Derived {
    let r0 = epsilon / (ell0 * c0);
    let c = 0.5 * (c3 * c3 * c0 / c1).ln();
    Derived {
        r0,
        c4: 0.5 * (2.0 / (c1 * r0 * r0)).ln(),
        c5: 0.5 * (2.0 * c0 * c3).ln(),
        c,
        b1: c,
    }
}

impl EmpiricalConstants {
    pub fn all(&self) -> Vec<(&'static str, &Measured)> {
        vec![
            ("epsilon", &self.epsilon),
            ("c0", &self.c0),
            ("c1", &self.c1),
            ("c3", &self.c3),
            ("c4", &self.c4),
            ("c5", &self.c5),
            ("D", &self.d),
            ("r0", &self.r0),
            ("ell0", &self.ell0),
            ("b0", &self.b0),
            ("b1", &self.b1),
            ("b2", &self.b2),
            ("B", &self.b),
            ("C", &self.c),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        if self.format_version != CONSTANTS_FORMAT_VERSION {
            return Err(TeichError::Serde(format!(
                "constants format {} unsupported (expected {CONSTANTS_FORMAT_VERSION})",
                self.format_version
            )));
        }
        for (name, m) in self.all() {
            if !(m.value > 0.0) || !m.value.is_finite() {
                return Err(TeichError::Domain(format!("constant {name} = {} is not positive", m.value)));
            }
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let c: EmpiricalConstants = serde_json::from_str(&text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn version_tag() -> String {
        ARTIFACT_VERSION.to_string()
    }
}

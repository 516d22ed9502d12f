use serde::{Deserialize, Serialize};

use super::{canonicalize, default_t_max, Level, Provenance, SpectrumModel};
use crate::error::{Error, Result};

/// On-disk spectrum representation. Levels may be unsorted on input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumFile {
    pub label: String,
    pub bounded: bool,
    pub levels: Vec<Level>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_tail_bound: Option<f64>,
}

/// A spectrum named by label (resolved by the caller) or given inline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpectrumRef {
    Label(String),
    Inline(SpectrumFile),
}

impl From<&SpectrumModel> for SpectrumFile {
    fn from(s: &SpectrumModel) -> Self {
        SpectrumFile {
            label: s.label().to_string(),
            bounded: s.bounded(),
            levels: s.levels().to_vec(),
            t_max: if s.bounded() { None } else { s.t_max() },
            truncation_tail_bound: if s.bounded() { None } else { Some(s.truncation_tail_bound()) },
        }
    }
}

impl TryFrom<SpectrumFile> for SpectrumModel {
    type Error = Error;

    fn try_from(f: SpectrumFile) -> Result<Self> {
        let levels = canonicalize(f.levels)?;
        let (t_max, tail) = if f.bounded {
            (None, 0.0)
        } else {
            let t = f.t_max.unwrap_or_else(|| default_t_max(&levels));
            (Some(t), f.truncation_tail_bound.unwrap_or(0.0))
        };
        if tail < 0.0 || tail.is_nan() {
            return Err(Error::InvalidInput(format!("tail bound {tail} must be nonnegative")));
        }
        Ok(SpectrumModel::from_parts(levels, f.bounded, tail, t_max, f.label, Provenance::File))
    }
}

impl SpectrumModel {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let f: SpectrumFile =
            serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("spectrum JSON: {e}")))?;
        f.try_into()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&SpectrumFile::from(self)).expect("spectrum serializes")
    }
}

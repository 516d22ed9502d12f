//! Reading spectrum, state, model and record files.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use ses_core::opensys::GrandModel;
use ses_core::spectra::{SpectrumFile, SpectrumRef};
use ses_core::states::{make_state, LevelDistribution};
use ses_core::{Error, Result, SpectrumModel};

fn read(path: &Path) -> Result<String> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    // reports written by this tool start with a `#` provenance line
    Ok(text.lines().filter(|l| !l.trim_start().starts_with('#')).collect::<Vec<_>>().join("\n"))
}

pub fn spectrum(path: &Path) -> Result<Arc<SpectrumModel>> {
    SpectrumModel::from_json_str(&read(path)?).map(Arc::new)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    spectrum: SpectrumRef,
    probs: Vec<f64>,
}

/// A label names a spectrum file next to the state file (`label` or `label.json`).
fn resolve_label(label: &str, base: &Path) -> Result<Arc<SpectrumModel>> {
    let dir = base.parent().unwrap_or_else(|| Path::new("."));
    let candidates: Vec<PathBuf> = vec![dir.join(label), dir.join(format!("{label}.json"))];
    for c in &candidates {
        if c.is_file() {
            return spectrum(c);
        }
    }
    Err(Error::InvalidInput(format!("spectrum label '{label}' does not name a file next to {}", base.display())))
}

pub fn state(path: &Path) -> Result<LevelDistribution> {
    let f: StateFile = serde_json::from_str(&read(path)?)
        .map_err(|e| Error::InvalidInput(format!("state {}: {e}", path.display())))?;
    let sp = match f.spectrum {
        SpectrumRef::Label(l) => resolve_label(&l, path)?,
        SpectrumRef::Inline(file) => Arc::new(SpectrumModel::try_from(file as SpectrumFile)?),
    };
    make_state(sp, f.probs)
}

pub fn grand_model(path: &Path) -> Result<GrandModel> {
    GrandModel::from_json_str(&read(path)?)
}

/// `(Q_out, T)` records, one per line, optional header row.
pub fn heat_records(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = read(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: Option<(f64, f64)> = match fields.as_slice() {
            [q, t] => q.parse().ok().zip(t.parse().ok()),
            _ => None,
        };
        match parsed {
            Some(r) => out.push(r),
            None if i == 0 && out.is_empty() => continue,
            None => return Err(Error::InvalidInput(format!("{} line {}: expected `Q,T`", path.display(), i + 1))),
        }
    }
    Ok(out)
}

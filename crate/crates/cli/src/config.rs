//! Run configuration: optional TOML file, overridden by flags.

use std::path::Path;

use serde::Deserialize;
use ses_core::units::{UnitMode, UnitSystem};
use ses_core::{Error, Result};

use crate::output::Format;

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub energy_tol: f64,
    pub entropy_tol: f64,
    pub fd_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { energy_tol: 1e-9, entropy_tol: 1e-9, fd_step: 1e-5 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub units: UnitMode,
    pub tolerances: Tolerances,
    pub output: Format,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { units: UnitMode::Reduced, tolerances: Tolerances::default(), output: Format::Csv, seed: 0 }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("config {}: {e}", path.display())))?;
        let cfg: RunConfig =
            toml::from_str(&text).map_err(|e| Error::InvalidInput(format!("config {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        for (name, v) in [("energy_tol", t.energy_tol), ("entropy_tol", t.entropy_tol), ("fd_step", t.fd_step)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("tolerance {name} = {v} must be positive")));
            }
        }
        Ok(())
    }

    pub fn unit_system(&self) -> UnitSystem {
        UnitSystem::from_mode(self.units)
    }
}

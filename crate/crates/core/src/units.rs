use serde::{Deserialize, Serialize};

pub const BOLTZMANN_SI: f64 = 1.38066e-23;
pub const PLANCK_SI: f64 = 6.6260e-34;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum UnitMode {
    #[default]
    Reduced,
    Si,
}

/// Physical constants used to turn model parameters into energies.
///
/// All library routines work with temperatures expressed as `k_B T` (energy
/// units) and entropies in units of `k_B`; the constants here matter only
/// when building spectra from physical parameters or reporting kelvins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    pub k_b: f64,
    pub h: f64,
    pub mode: UnitMode,
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::reduced()
    }
}

impl UnitSystem {
    pub fn reduced() -> Self {
        UnitSystem { k_b: 1.0, h: 1.0, mode: UnitMode::Reduced }
    }

    pub fn si() -> Self {
        UnitSystem { k_b: BOLTZMANN_SI, h: PLANCK_SI, mode: UnitMode::Si }
    }

    pub fn from_mode(mode: UnitMode) -> Self {
        match mode {
            UnitMode::Reduced => Self::reduced(),
            UnitMode::Si => Self::si(),
        }
    }

    /// Absolute temperature corresponding to `b = 1/(k_B T)`.
    pub fn temperature(&self, b: f64) -> f64 {
        1.0 / (self.k_b * b)
    }

    pub fn beta(&self, temperature: f64) -> f64 {
        1.0 / (self.k_b * temperature)
    }
}

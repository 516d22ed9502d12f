//! Work-extraction bounds: adiabatic availability, ergotropy, available
//! energy with respect to a reservoir and the reservoir availability functions.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::equilibrium::{canonical_state, ses_energy_of_entropy, thermal_properties, Branch, ThermalPoint};
use crate::error::{Error, Result};
use crate::spectra::SpectrumModel;
use crate::states::{passive_sort, LevelDistribution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReservoirKind {
    #[serde(rename = "fixed_Vn")]
    FixedVn,
    #[serde(rename = "variable_V")]
    VariableV,
    #[serde(rename = "variable_ni")]
    VariableNi,
    #[serde(rename = "variable_Vn")]
    VariableVn,
}

impl ReservoirKind {
    pub fn name(&self) -> &'static str {
        match self {
            ReservoirKind::FixedVn => "fixed_Vn",
            ReservoirKind::VariableV => "variable_V",
            ReservoirKind::VariableNi => "variable_ni",
            ReservoirKind::VariableVn => "variable_Vn",
        }
    }

    pub fn exchanges_volume(&self) -> bool {
        matches!(self, ReservoirKind::VariableV | ReservoirKind::VariableVn)
    }

    pub fn exchanges_amount(&self) -> bool {
        matches!(self, ReservoirKind::VariableNi | ReservoirKind::VariableVn)
    }
}

impl std::str::FromStr for ReservoirKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed_Vn" => Ok(ReservoirKind::FixedVn),
            "variable_V" => Ok(ReservoirKind::VariableV),
            "variable_ni" => Ok(ReservoirKind::VariableNi),
            "variable_Vn" => Ok(ReservoirKind::VariableVn),
            other => Err(Error::InvalidInput(format!("unknown reservoir kind `{other}`"))),
        }
    }
}

/// Thermal reservoir, possibly also exchanging volume and/or particles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reservoir {
    temperature: f64,
    pressure: Option<f64>,
    mu: Option<f64>,
    kind: ReservoirKind,
}

impl Reservoir {
    pub fn new(kind: ReservoirKind, temperature: f64, pressure: Option<f64>, mu: Option<f64>) -> Result<Self> {
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(Error::NonPositiveTemperature(temperature));
        }
        let k = kind.name();
        match (kind.exchanges_volume(), pressure) {
            (true, None) => return Err(Error::KindFieldMissing { kind: k, field: "p_R" }),
            (false, Some(_)) => return Err(Error::KindMismatch { kind: k, quantity: "volume" }),
            (true, Some(p)) if !(p.is_finite() && p > 0.0) => {
                return Err(Error::InvalidInput(format!("reservoir pressure {p} must be positive")))
            }
            _ => {}
        }
        match (kind.exchanges_amount(), mu) {
            (true, None) => return Err(Error::KindFieldMissing { kind: k, field: "mu_R" }),
            (false, Some(_)) => return Err(Error::KindMismatch { kind: k, quantity: "amount" }),
            _ => {}
        }
        Ok(Reservoir { temperature, pressure, mu, kind })
    }

    pub fn thermal(temperature: f64) -> Result<Self> {
        Self::new(ReservoirKind::FixedVn, temperature, None, None)
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn pressure(&self) -> Option<f64> {
        self.pressure
    }

    pub fn mu(&self) -> Option<f64> {
        self.mu
    }

    pub fn kind(&self) -> ReservoirKind {
        self.kind
    }
}

/// A state together with its volume and amount of constituent.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedState {
    pub state: LevelDistribution,
    pub volume: f64,
    pub amount: f64,
}

impl ExtendedState {
    pub fn new(state: LevelDistribution, volume: f64, amount: f64) -> Result<Self> {
        if !(volume.is_finite() && volume > 0.0) || !(amount.is_finite() && amount >= 0.0) {
            return Err(Error::InvalidInput(format!("volume {volume} / amount {amount} out of range")));
        }
        Ok(ExtendedState { state, volume, amount })
    }
}

/// Least stable-equilibrium energy with entropy at least `entropy`.
///
/// Below `ln g_ground` every entropy is reachable from the ground manifold.
pub fn ses_energy_floor(spectrum: &SpectrumModel, entropy: f64) -> Result<f64> {
    let ground = spectrum.ground();
    if entropy <= ground.degeneracy.ln() {
        return Ok(ground.energy);
    }
    ses_energy_of_entropy(spectrum, entropy, Branch::PositiveT)
}

/// `Psi = E - E_ses(S)` on the positive-temperature branch.
pub fn adiabatic_availability(state: &LevelDistribution) -> Result<f64> {
    let e_ses = ses_energy_floor(state.spectrum(), state.entropy())?;
    Ok((state.energy() - e_ses).max(0.0))
}

/// Energy released by the optimal rearrangement of the probabilities.
pub fn ergotropy(state: &LevelDistribution) -> f64 {
    (state.energy() - passive_sort(state).energy()).max(0.0)
}

/// Decomposition of the available energy with respect to a thermal reservoir.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AvailableEnergy {
    /// Canonical point of the system at the reservoir temperature.
    pub reference: ThermalPoint,
    /// `E - E_R`.
    pub energy_term: f64,
    /// `T_R (S_R - S)`.
    pub entropy_term: f64,
    pub omega: f64,
}

pub fn available_energy_parts(state: &LevelDistribution, reservoir: &Reservoir) -> Result<AvailableEnergy> {
    if reservoir.kind != ReservoirKind::FixedVn {
        return Err(Error::KindMismatch { kind: reservoir.kind.name(), quantity: "volume or amount" });
    }
    let t_r = reservoir.temperature;
    let reference = thermal_properties(state.spectrum().as_ref(), 1.0 / t_r)?;
    let energy_term = state.energy() - reference.energy;
    let entropy_term = t_r * (reference.entropy - state.entropy());
    Ok(AvailableEnergy { reference, energy_term, entropy_term, omega: energy_term + entropy_term })
}

/// `Omega^R = (E - E_R) - T_R (S - S_R)`.
pub fn available_energy(state: &LevelDistribution, reservoir: &Reservoir) -> Result<f64> {
    available_energy_parts(state, reservoir).map(|a| a.omega)
}

/// The state in mutual stable equilibrium with a thermal reservoir.
pub fn reservoir_state(spectrum: &Arc<SpectrumModel>, reservoir: &Reservoir) -> Result<LevelDistribution> {
    if reservoir.kind != ReservoirKind::FixedVn {
        return Err(Error::KindMismatch { kind: reservoir.kind.name(), quantity: "volume or amount" });
    }
    canonical_state(spectrum, 1.0 / reservoir.temperature)
}

/// Availability function of `(E, S, V, n)` for the reservoir's kind.
pub fn availability_value(energy: f64, entropy: f64, volume: f64, amount: f64, reservoir: &Reservoir) -> Result<f64> {
    let mut a = energy - reservoir.temperature * entropy;
    if reservoir.kind.exchanges_volume() {
        let p = reservoir.pressure.ok_or(Error::KindFieldMissing { kind: reservoir.kind.name(), field: "p_R" })?;
        a += p * volume;
    }
    if reservoir.kind.exchanges_amount() {
        let mu = reservoir.mu.ok_or(Error::KindFieldMissing { kind: reservoir.kind.name(), field: "mu_R" })?;
        a -= mu * amount;
    }
    Ok(a)
}

/// `Gamma`, `Phi`, `Upsilon` or `Xi` depending on the reservoir kind.
pub fn availability_function(x: &ExtendedState, reservoir: &Reservoir) -> Result<f64> {
    availability_value(x.state.energy(), x.state.entropy(), x.volume, x.amount, reservoir)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalWork {
    pub reversible: f64,
    /// `W_rev - T_R S_gen` when an entropy generation was supplied.
    pub actual: Option<f64>,
}

fn differs(a: f64, b: f64) -> bool {
    (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Optimal work from `x1` to `x2` in contact with `reservoir`.
pub fn optimal_work(
    x1: &ExtendedState,
    x2: &ExtendedState,
    reservoir: &Reservoir,
    entropy_generated: Option<f64>,
) -> Result<OptimalWork> {
    let kind = reservoir.kind;
    if differs(x1.volume, x2.volume) && !kind.exchanges_volume() {
        return Err(Error::KindMismatch { kind: kind.name(), quantity: "volume" });
    }
    if differs(x1.amount, x2.amount) && !kind.exchanges_amount() {
        return Err(Error::KindMismatch { kind: kind.name(), quantity: "amount" });
    }
    let reversible = availability_function(x1, reservoir)? - availability_function(x2, reservoir)?;
    let actual = entropy_generated.map(|s| reversible - reservoir.temperature * s);
    Ok(OptimalWork { reversible, actual })
}

/// Entropy and energy that an engine fed by `T_A` must dispose of at `T_B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinkRequirements {
    /// Entropy that must leave the engine: `E/T_A + S_irr`.
    pub min_entropy_out: f64,
    /// Energy that must reach the sink: `T_B E/T_A + T_B S_irr`.
    pub min_sink_energy: f64,
    /// `1 - T_B/T_A`.
    pub carnot_fraction: f64,
}

pub fn sink_requirements(t_a: f64, t_b: f64, energy_out: f64, entropy_irr: f64) -> Result<SinkRequirements> {
    if !(t_b > 0.0 && t_a > t_b && t_a.is_finite()) {
        return Err(Error::TemperatureOrder { t_a, t_b });
    }
    if !(energy_out > 0.0 && energy_out.is_finite()) || !(entropy_irr >= 0.0 && entropy_irr.is_finite()) {
        return Err(Error::InvalidInput("need E_out > 0 and S_irr >= 0".into()));
    }
    let min_entropy_out = energy_out / t_a + entropy_irr;
    Ok(SinkRequirements {
        min_entropy_out,
        min_sink_energy: (t_b / t_a) * energy_out + t_b * entropy_irr,
        carnot_fraction: 1.0 - t_b / t_a,
    })
}

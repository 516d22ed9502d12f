//! Statistical thermodynamics of discrete-spectrum systems of any size:
//! stable-equilibrium states, availability and ergotropy, bounds on non-work
//! interactions and the work of partitioning.

// `!(x > 0.0)` is used deliberately so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod availability;
pub mod diagram;
pub mod equilibrium;
pub mod error;
pub mod interactions;
pub mod opensys;
pub mod partitioning;
mod roots;
pub mod spectra;
pub mod states;
pub mod units;
pub mod verify;

pub use availability::{ExtendedState, Reservoir, ReservoirKind};
pub use equilibrium::{Branch, CanonicalSystem, EnergyInversion, ThermalPoint};
pub use error::{Error, Result};
pub use opensys::{GrandModel, GrandPoint};
pub use spectra::{Level, SpectrumModel};
pub use states::LevelDistribution;
pub use units::UnitSystem;

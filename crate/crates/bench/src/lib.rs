//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use ses_core::spectra::{build_finite, build_oscillator_auto, BoxGeometry, SeparableBox};
use ses_core::states::make_state;
use ses_core::{LevelDistribution, SpectrumModel, UnitSystem};

/// Levels `0, 1, ..., n-1` with degeneracies cycling through 1..=3.
pub fn ladder(n: usize) -> SpectrumModel {
    let levels: Vec<(f64, f64)> = (0..n).map(|i| (i as f64 * 0.37, (1 + i % 3) as f64)).collect();
    build_finite(&levels).expect("ladder levels are valid")
}

pub fn oscillator() -> SpectrumModel {
    build_oscillator_auto(1.0, 10.0, 1e-12).expect("oscillator builds")
}

pub fn unit_box() -> SeparableBox {
    SeparableBox::new(BoxGeometry::cube(1.0, 1.0).expect("unit cube"), UnitSystem::reduced())
}

/// A fixed non-equilibrium state on `ladder(n)`.
pub fn skewed_state(n: usize) -> LevelDistribution {
    let sp = Arc::new(ladder(n));
    let w: Vec<f64> = (0..n).map(|i| 1.0 + ((i * 7919) % 13) as f64).collect();
    let total: f64 = w.iter().sum();
    make_state(sp, w.iter().map(|x| x / total).collect()).expect("weights form a state")
}

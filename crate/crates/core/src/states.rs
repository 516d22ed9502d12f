//! Diagonal states: probability distributions over the levels of a spectrum.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spectra::{compose, SpectrumModel, MERGE_TOLERANCE};

/// Band within which a probability vector is silently renormalized.
pub const RENORMALIZATION_BAND: f64 = 1e-9;

/// Maximum entropy at a given energy, supplied by the equilibrium machinery.
pub trait SesEntropy {
    fn max_entropy(&self, spectrum: &SpectrumModel, energy: f64) -> Result<f64>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelDistribution {
    spectrum: Arc<SpectrumModel>,
    probs: Vec<f64>,
    adjustment: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    pub energy: f64,
    pub entropy: f64,
    pub variance: f64,
    pub disequilibrium: f64,
}

/// Validate `probs` against `spectrum`, renormalizing sums within
/// [`RENORMALIZATION_BAND`] of one.
pub fn make_state(spectrum: Arc<SpectrumModel>, probs: Vec<f64>) -> Result<LevelDistribution> {
    if probs.len() != spectrum.len() {
        return Err(Error::LengthMismatch { expected: spectrum.len(), found: probs.len() });
    }
    for (index, &value) in probs.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::InvalidInput(format!("probability {value} at level {index} is not finite")));
        }
        if value < 0.0 {
            return Err(Error::NegativeProbability { index, value });
        }
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > RENORMALIZATION_BAND {
        return Err(Error::NotNormalized(sum));
    }
    let probs = if sum == 1.0 { probs } else { probs.into_iter().map(|p| p / sum).collect() };
    Ok(LevelDistribution { spectrum, probs, adjustment: sum - 1.0 })
}

impl LevelDistribution {
    /// Trusted constructor for distributions built internally (already normalized).
    pub(crate) fn from_normalized(spectrum: Arc<SpectrumModel>, probs: Vec<f64>) -> Self {
        debug_assert_eq!(spectrum.len(), probs.len());
        LevelDistribution { spectrum, probs, adjustment: 0.0 }
    }

    pub fn spectrum(&self) -> &Arc<SpectrumModel> {
        &self.spectrum
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `sum(p) - 1` of the input before renormalization (0 when exact).
    pub fn adjustment(&self) -> f64 {
        self.adjustment
    }

    pub fn energy(&self) -> f64 {
        self.spectrum.levels().iter().zip(&self.probs).map(|(l, p)| p * l.energy).sum()
    }

    /// `-sum p ln(p/g)` in units of `k_B`, with `0 ln 0 = 0`.
    pub fn entropy(&self) -> f64 {
        -self
            .spectrum
            .levels()
            .iter()
            .zip(&self.probs)
            .filter(|(_, &p)| p > 0.0)
            .map(|(l, &p)| p * (p / l.degeneracy).ln())
            .sum::<f64>()
    }

    pub fn variance(&self) -> f64 {
        let e = self.energy();
        self.spectrum.levels().iter().zip(&self.probs).map(|(l, p)| p * (l.energy - e) * (l.energy - e)).sum()
    }

    pub fn observables(&self, oracle: &dyn SesEntropy) -> Result<Observables> {
        let energy = self.energy();
        let entropy = self.entropy();
        let s_max = oracle.max_entropy(&self.spectrum, energy)?;
        Ok(Observables { energy, entropy, variance: self.variance(), disequilibrium: (s_max - entropy).max(0.0) })
    }

    /// Total-variation distance to another distribution on the same spectrum.
    pub fn total_variation(&self, other: &LevelDistribution) -> f64 {
        0.5 * self.probs.iter().zip(&other.probs).map(|(a, b)| (a - b).abs()).sum::<f64>()
    }
}

/// Lowest-energy rearrangement of the state's probabilities.
///
/// Each level of degeneracy `g` is viewed as `g` sublevels carrying density
/// `p/g`. The densities are sorted in decreasing order and laid out along the
/// sublevels in order of increasing energy, then re-aggregated per level.
pub fn passive_sort(state: &LevelDistribution) -> LevelDistribution {
    let levels = state.spectrum.levels();
    let mut blocks: Vec<(f64, f64)> =
        levels.iter().zip(&state.probs).map(|(l, &p)| (p / l.degeneracy, l.degeneracy)).collect();
    // stable: equal densities keep their energy order
    blocks.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut out = vec![0.0; levels.len()];
    let mut k = 0;
    let mut left_in_block = blocks.first().map_or(0.0, |b| b.1);
    for (j, level) in levels.iter().enumerate() {
        let mut room = level.degeneracy;
        while room > 0.0 && k < blocks.len() {
            let take = room.min(left_in_block);
            out[j] += take * blocks[k].0;
            room -= take;
            left_in_block -= take;
            if left_in_block <= 0.0 {
                k += 1;
                left_in_block = blocks.get(k).map_or(0.0, |b| b.1);
            }
        }
    }
    LevelDistribution::from_normalized(state.spectrum.clone(), out)
}

/// Product of two independent states on the composite spectrum (no cutoff).
pub fn product_state(a: &LevelDistribution, b: &LevelDistribution) -> Result<LevelDistribution> {
    let composite = Arc::new(compose(&a.spectrum, &b.spectrum, f64::INFINITY)?);
    product_state_on(a, b, composite)
}

/// Product state placed on an already built composite spectrum.
pub fn product_state_on(
    a: &LevelDistribution,
    b: &LevelDistribution,
    composite: Arc<SpectrumModel>,
) -> Result<LevelDistribution> {
    let energies: Vec<f64> = composite.energies().collect();
    let tol = MERGE_TOLERANCE * composite.span();
    let mut probs = vec![0.0; energies.len()];
    for (la, pa) in a.spectrum.levels().iter().zip(&a.probs) {
        for (lb, pb) in b.spectrum.levels().iter().zip(&b.probs) {
            let e = la.energy + lb.energy;
            let idx = energies.partition_point(|&x| x <= e + tol);
            if idx == 0 {
                return Err(Error::InvalidInput("composite spectrum does not contain the product levels".into()));
            }
            probs[idx - 1] += pa * pb;
        }
    }
    make_state(composite, probs)
}

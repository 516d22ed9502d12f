//! Discrete energy spectra: finite-level systems, truncated harmonic
//! oscillators, particles in a box, and composites of independent systems.
//!
//! A [`SpectrumModel`] always holds its levels sorted by strictly increasing
//! energy with positive (possibly non-integer) degeneracies. Spectra that
//! approximate an unbounded set of levels carry the temperature `t_max` up to
//! which they were certified and the neglected canonical mass at that
//! temperature.

mod io;
mod oscillator;
mod particle_box;

pub use io::{SpectrumFile, SpectrumRef};
pub use oscillator::{build_oscillator, build_oscillator_auto, oscillator_levels_for, oscillator_tail_bound};
pub use particle_box::{
    box_tail_bound, build_box, directional_tail_ratio, BoxGeometry, DirectionalMoments, SeparableBox,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Neglected canonical probability mass an equilibrium-ready spectrum may carry.
pub const TAIL_LIMIT: f64 = 1e-10;

/// Relative tolerance (of the energy span) below which levels are merged.
pub const MERGE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub energy: f64,
    pub degeneracy: f64,
}

impl Level {
    pub fn new(energy: f64, degeneracy: f64) -> Self {
        Level { energy, degeneracy }
    }
}

/// Where a spectrum came from. Used to recover volume-scaling rules.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Finite,
    Oscillator { hnu: f64 },
    Box { geometry: BoxGeometry, cutoff: usize },
    Composite,
    File,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumModel {
    levels: Vec<Level>,
    bounded: bool,
    tail_bound: f64,
    t_max: Option<f64>,
    label: String,
    provenance: Provenance,
}

impl SpectrumModel {
    pub(crate) fn from_parts(
        levels: Vec<Level>,
        bounded: bool,
        tail_bound: f64,
        t_max: Option<f64>,
        label: impl Into<String>,
        provenance: Provenance,
    ) -> Self {
        debug_assert!(levels.windows(2).all(|w| w[0].energy < w[1].energy));
        SpectrumModel { levels, bounded, tail_bound, t_max, label: label.into(), provenance }
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// `true` when the spectrum is physically bounded (every level present).
    pub fn bounded(&self) -> bool {
        self.bounded
    }

    /// Certified neglected canonical mass at [`SpectrumModel::t_max`].
    pub fn truncation_tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Largest supported temperature `k_B T` for truncated spectra.
    pub fn t_max(&self) -> Option<f64> {
        self.t_max
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn ground(&self) -> Level {
        self.levels[0]
    }

    pub fn top(&self) -> Level {
        *self.levels.last().expect("spectrum has at least one level")
    }

    pub fn energies(&self) -> impl Iterator<Item = f64> + '_ {
        self.levels.iter().map(|l| l.energy)
    }

    pub fn span(&self) -> f64 {
        self.top().energy - self.ground().energy
    }

    /// `ln Σ g_j`, the largest entropy (in units of `k_B`) the level set supports.
    pub fn ln_total_degeneracy(&self) -> f64 {
        self.levels.iter().map(|l| l.degeneracy).sum::<f64>().ln()
    }

    pub fn total_degeneracy(&self) -> f64 {
        self.levels.iter().map(|l| l.degeneracy).sum()
    }

    /// Largest gap between consecutive levels (0 for a single level).
    pub fn largest_gap(&self) -> f64 {
        self.levels.windows(2).map(|w| w[1].energy - w[0].energy).fold(0.0, f64::max)
    }

    /// Same levels with every energy multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<SpectrumModel> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::InvalidInput(format!("energy scale factor {factor} must be positive")));
        }
        let levels = self.levels.iter().map(|l| Level::new(l.energy * factor, l.degeneracy)).collect();
        let provenance = match &self.provenance {
            Provenance::Box { geometry, cutoff } => {
                // eps ~ V^(-2/3): scaling energies by f maps the sides by f^(-1/2).
                let s = factor.powf(-0.5);
                let mut g = *geometry;
                g.sides = [g.sides[0] * s, g.sides[1] * s, g.sides[2] * s];
                Provenance::Box { geometry: g, cutoff: *cutoff }
            }
            Provenance::Oscillator { hnu } => Provenance::Oscillator { hnu: hnu * factor },
            other => other.clone(),
        };
        Ok(SpectrumModel {
            levels,
            bounded: self.bounded,
            tail_bound: self.tail_bound,
            t_max: self.t_max.map(|t| t * factor),
            label: self.label.clone(),
            provenance,
        })
    }

    /// Check the truncation certificate against `limit`.
    pub fn certify(&self, limit: f64) -> Result<()> {
        if self.bounded || self.tail_bound < limit {
            Ok(())
        } else {
            Err(Error::TruncationTooCoarse { bound: self.tail_bound, limit, t_max: self.t_max.unwrap_or(f64::NAN) })
        }
    }
}

/// Validate, sort and merge raw levels.
///
/// Energies closer than `MERGE_TOLERANCE * span` are merged into one level
/// whose degeneracy is the sum; the merged energy is the lowest of the group.
pub(crate) fn canonicalize(mut raw: Vec<Level>) -> Result<Vec<Level>> {
    if raw.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    for l in &raw {
        if !l.energy.is_finite() {
            return Err(Error::NonFiniteEnergy(l.energy));
        }
        if !(l.degeneracy > 0.0 && l.degeneracy.is_finite()) {
            return Err(Error::NonPositiveDegeneracy(l.degeneracy));
        }
    }
    raw.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    let span = raw[raw.len() - 1].energy - raw[0].energy;
    let tol = MERGE_TOLERANCE * span;
    let mut out: Vec<Level> = Vec::with_capacity(raw.len());
    for l in raw {
        match out.last_mut() {
            Some(last) if l.energy - last.energy <= tol => last.degeneracy += l.degeneracy,
            _ => out.push(l),
        }
    }
    Ok(out)
}

/// Finite, physically bounded spectrum from `(energy, degeneracy)` pairs.
pub fn build_finite(levels: &[(f64, f64)]) -> Result<SpectrumModel> {
    let raw = levels.iter().map(|&(e, g)| Level::new(e, g)).collect();
    let levels = canonicalize(raw)?;
    Ok(SpectrumModel::from_parts(levels, true, 0.0, None, "finite", Provenance::Finite))
}

/// Default certification temperature for a truncated spectrum: ten times the
/// largest level gap.
pub fn default_t_max(levels: &[Level]) -> f64 {
    let gap = levels.windows(2).map(|w| w[1].energy - w[0].energy).fold(0.0, f64::max);
    10.0 * gap
}

/// Spectrum of two independent systems: all pairwise level sums up to
/// `energy_cutoff` with product degeneracies.
pub fn compose(a: &SpectrumModel, b: &SpectrumModel, energy_cutoff: f64) -> Result<SpectrumModel> {
    let ground = a.ground().energy + b.ground().energy;
    if energy_cutoff.is_nan() || energy_cutoff < ground {
        return Err(Error::CutoffBelowGround { cutoff: energy_cutoff, ground });
    }

    let mut raw = Vec::new();
    // first pruned index of b for each level of a
    let mut first_pruned = Vec::with_capacity(a.len());
    for la in a.levels() {
        let mut j = 0;
        for lb in b.levels() {
            if la.energy + lb.energy > energy_cutoff {
                break;
            }
            raw.push(Level::new(la.energy + lb.energy, la.degeneracy * lb.degeneracy));
            j += 1;
        }
        first_pruned.push(j);
    }
    let complete = first_pruned.iter().all(|&j| j == b.len());
    let levels = canonicalize(raw)?;

    let bounded = a.bounded && b.bounded && complete;
    let t_max = match (a.t_max, b.t_max) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) if !bounded => Some(default_t_max(&levels)),
        (None, None) => None,
    };
    let tail = match t_max {
        Some(t) if !bounded => a.tail_bound + b.tail_bound + pruned_fraction(a, b, &first_pruned, 1.0 / t),
        _ => 0.0,
    };

    Ok(SpectrumModel::from_parts(
        levels,
        bounded,
        tail,
        if bounded { None } else { t_max },
        format!("{}*{}", a.label, b.label),
        Provenance::Composite,
    ))
}

/// Canonical mass (at inverse temperature `beta`) of the level pairs dropped by
/// the cutoff, relative to the full product of the two truncated spectra.
fn pruned_fraction(a: &SpectrumModel, b: &SpectrumModel, first_pruned: &[usize], beta: f64) -> f64 {
    let wa: Vec<f64> = boltzmann_weights(a, beta);
    let wb: Vec<f64> = boltzmann_weights(b, beta);
    let mut suffix = vec![0.0; wb.len() + 1];
    for j in (0..wb.len()).rev() {
        suffix[j] = suffix[j + 1] + wb[j];
    }
    let pruned: f64 = wa.iter().zip(first_pruned).map(|(w, &j)| w * suffix[j]).sum();
    pruned / (wa.iter().sum::<f64>() * suffix[0])
}

fn boltzmann_weights(s: &SpectrumModel, beta: f64) -> Vec<f64> {
    let e0 = s.ground().energy;
    s.levels().iter().map(|l| l.degeneracy * (-beta * (l.energy - e0)).exp()).collect()
}

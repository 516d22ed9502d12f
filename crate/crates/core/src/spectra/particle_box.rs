use serde::{Deserialize, Serialize};

use super::{canonicalize, default_t_max, Level, Provenance, SpectrumModel, TAIL_LIMIT};
use crate::error::{Error, Result};
use crate::units::UnitSystem;

/// Rectangular container holding one particle of mass `mass`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxGeometry {
    pub mass: f64,
    pub sides: [f64; 3],
}

impl BoxGeometry {
    pub fn new(mass: f64, sides: [f64; 3]) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidInput(format!("mass {mass} must be positive")));
        }
        if sides.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
            return Err(Error::InvalidInput(format!("side lengths {sides:?} must be positive")));
        }
        Ok(BoxGeometry { mass, sides })
    }

    pub fn cube(mass: f64, side: f64) -> Result<Self> {
        Self::new(mass, [side; 3])
    }

    pub fn volume(&self) -> f64 {
        self.sides[0] * self.sides[1] * self.sides[2]
    }

    /// Isotropically rescaled copy with volume `v`.
    pub fn with_volume(&self, v: f64) -> Result<Self> {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidInput(format!("volume {v} must be positive")));
        }
        let s = (v / self.volume()).cbrt();
        Self::new(self.mass, [self.sides[0] * s, self.sides[1] * s, self.sides[2] * s])
    }

    /// Directional energy quantum `h^2 / (8 m l_i^2)`.
    pub fn quantum(&self, direction: usize, units: &UnitSystem) -> f64 {
        let l = self.sides[direction];
        units.h * units.h / (8.0 * self.mass * l * l)
    }
}

/// Ratio of the dropped to the kept directional sum for quantum numbers above
/// `cutoff`, at `a = b * quantum`.
///
/// Uses `sum_{j>J} e^{-a j^2} <= e^{-a(J+1)^2} / (1 - e^{-2a(J+1)})`.
pub fn directional_tail_ratio(a: f64, cutoff: usize) -> f64 {
    let j1 = cutoff as f64 + 1.0;
    // both sums are shifted by e^{a} so the j = 1 term is exactly 1
    let tail = (-a * (j1 * j1 - 1.0)).exp() / -(-2.0 * a * j1).exp_m1();
    let kept: f64 = (1..=cutoff).map(|j| (-a * ((j * j) as f64 - 1.0)).exp()).sum();
    tail / kept
}

/// Union bound on the canonical mass neglected by a box cut at `cutoff` per
/// direction, at temperature `t_max`.
pub fn box_tail_bound(geom: &BoxGeometry, cutoff: usize, units: &UnitSystem, t_max: f64) -> f64 {
    (0..3).map(|i| directional_tail_ratio(geom.quantum(i, units) / t_max, cutoff)).sum()
}

/// Particle-in-a-box levels for quantum numbers `1..=max_quantum_number` in each
/// direction, merged by equal energy.
pub fn build_box(
    geom: &BoxGeometry,
    max_quantum_number: usize,
    units: &UnitSystem,
    t_max: Option<f64>,
) -> Result<SpectrumModel> {
    if max_quantum_number < 2 {
        return Err(Error::InvalidInput("box cutoff must be at least 2".into()));
    }
    let c = [geom.quantum(0, units), geom.quantum(1, units), geom.quantum(2, units)];
    let jmax = max_quantum_number;
    let mut raw = Vec::with_capacity(jmax * jmax * jmax);
    for j1 in 1..=jmax {
        for j2 in 1..=jmax {
            for j3 in 1..=jmax {
                let (a, b, d) = ((j1 * j1) as f64, (j2 * j2) as f64, (j3 * j3) as f64);
                raw.push(Level::new(c[0] * a + c[1] * b + c[2] * d, 1.0));
            }
        }
    }
    let levels = canonicalize(raw)?;
    let t_max = t_max.unwrap_or_else(|| default_t_max(&levels));
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::NonPositiveTemperature(t_max));
    }
    let tail = box_tail_bound(geom, jmax, units, t_max);
    if tail.is_nan() || tail >= TAIL_LIMIT {
        return Err(Error::TruncationTooCoarse { bound: tail, limit: TAIL_LIMIT, t_max });
    }
    Ok(SpectrumModel::from_parts(
        levels,
        false,
        tail,
        Some(t_max),
        format!("box(m={}, l={:?})", geom.mass, geom.sides),
        Provenance::Box { geometry: *geom, cutoff: jmax },
    ))
}

/// A particle in a box kept in factorised form.
///
/// The canonical sum over the three quantum numbers factorises into
/// directional one-dimensional sums, each evaluated until its terms drop
/// below machine precision. This reaches the near-classical regime, where the
/// enumerated spectrum would need millions of levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparableBox {
    pub geometry: BoxGeometry,
    pub units: UnitSystem,
}

/// Canonical moments of one direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionalMoments {
    pub ln_q: f64,
    pub energy: f64,
    pub variance: f64,
    pub entropy: f64,
}

impl SeparableBox {
    pub fn new(geometry: BoxGeometry, units: UnitSystem) -> Self {
        SeparableBox { geometry, units }
    }

    pub fn volume(&self) -> f64 {
        self.geometry.volume()
    }

    pub fn with_volume(&self, v: f64) -> Result<Self> {
        Ok(SeparableBox { geometry: self.geometry.with_volume(v)?, units: self.units })
    }

    /// Lowest energy, all quantum numbers equal to 1.
    pub fn ground_energy(&self) -> f64 {
        (0..3).map(|i| self.geometry.quantum(i, &self.units)).sum()
    }

    /// Moments of direction `i` at inverse temperature `b > 0`.
    pub fn directional(&self, i: usize, b: f64) -> DirectionalMoments {
        let c = self.geometry.quantum(i, &self.units);
        let a = b * c;
        // weights relative to j = 1; excess energies relative to c
        let (mut s0, mut s1, mut s2) = (0.0f64, 0.0f64, 0.0f64);
        let mut j = 1u64;
        loop {
            let k = (j * j - 1) as f64;
            let w = (-a * k).exp();
            s0 += w;
            s1 += w * k;
            s2 += w * k * k;
            if w < 1e-18 * s0 {
                break;
            }
            j += 1;
        }
        let m1 = s1 / s0;
        let var = (s2 / s0 - m1 * m1).max(0.0);
        DirectionalMoments {
            ln_q: s0.ln() - a,
            energy: c * (1.0 + m1),
            variance: c * c * var,
            entropy: a * m1 + s0.ln(),
        }
    }

    /// Mean energy per direction at inverse temperature `b`.
    pub fn directional_energies(&self, b: f64) -> [f64; 3] {
        [0, 1, 2].map(|i| self.directional(i, b).energy)
    }
}

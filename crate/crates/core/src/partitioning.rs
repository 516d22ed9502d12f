//! Work of splitting a system into `lambda` identical compartments and the
//! subdivision potential.

use std::f64::consts::PI;

use crate::equilibrium::{max_entropy_at, ses_point_of_entropy, Branch, CanonicalSystem, EnergyInversion, Replicated};
use crate::error::{Error, Result};
use crate::spectra::{build_box, compose, BoxGeometry, SeparableBox, SpectrumModel};
use crate::units::UnitSystem;

/// Largest particle count handled by explicit composite spectra.
pub const COMPOSED_MAX_PARTICLES: usize = 4;
/// Largest composite level count handled by explicit composite spectra.
pub const COMPOSED_MAX_LEVELS: usize = 200_000;

/// A family of systems whose stable-equilibrium energy `E(S, V, n)` is known
/// for every volume and amount.
pub trait ScalableFamily {
    fn energy(&self, entropy: f64, volume: f64, amount: f64) -> Result<f64>;
    fn entropy(&self, energy: f64, volume: f64, amount: f64) -> Result<f64>;
    /// Hill free energy `E - TS + pV - mu n` of the state `(S, V, n)`.
    fn euler(&self, entropy: f64, volume: f64, amount: f64) -> Result<f64>;
    /// Whether `amount` must be a whole number of particles.
    fn integer_amounts(&self) -> bool {
        false
    }
}

/// Classical monatomic gas of distinguishable particles,
/// `S = n [ln(V (2 pi m T/h^2)^{3/2}) + 3/2]`, `E = 3/2 n T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealGasFamily {
    pub mass: f64,
    pub units: UnitSystem,
}

impl IdealGasFamily {
    /// `k_B T` of the state with entropy `s` per particle in volume `v`.
    pub fn temperature(&self, s_per: f64, volume: f64) -> f64 {
        let h2 = self.units.h * self.units.h;
        // (2 pi m T / h^2)^{3/2} = exp(s - 3/2) / V
        ((s_per - 1.5 - volume.ln()) * 2.0 / 3.0).exp() * h2 / (2.0 * PI * self.mass)
    }

    pub fn entropy_at_temperature(&self, t: f64, volume: f64, amount: f64) -> f64 {
        let h2 = self.units.h * self.units.h;
        amount * ((volume * (2.0 * PI * self.mass * t / h2).powf(1.5)).ln() + 1.5)
    }
}

impl ScalableFamily for IdealGasFamily {
    fn energy(&self, entropy: f64, volume: f64, amount: f64) -> Result<f64> {
        Ok(1.5 * amount * self.temperature(entropy / amount, volume))
    }

    fn entropy(&self, energy: f64, volume: f64, amount: f64) -> Result<f64> {
        Ok(self.entropy_at_temperature(energy / (1.5 * amount), volume, amount))
    }

    fn euler(&self, entropy: f64, volume: f64, amount: f64) -> Result<f64> {
        // F - mu n = 0 for distinguishable particles, so Eu = pV = n T
        Ok(amount * self.temperature(entropy / amount, volume))
    }
}

/// Distinguishable particles in a cubic box with exact directional sums:
/// `E(S, V, n) = n e_1(S/n, V)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxGasFamily {
    pub mass: f64,
    pub units: UnitSystem,
}

impl BoxGasFamily {
    pub fn particle(&self, volume: f64) -> Result<SeparableBox> {
        Ok(SeparableBox::new(BoxGeometry::cube(self.mass, volume.cbrt())?, self.units))
    }
}

impl ScalableFamily for BoxGasFamily {
    fn energy(&self, entropy: f64, volume: f64, amount: f64) -> Result<f64> {
        let p = self.particle(volume)?;
        Ok(amount * ses_point_of_entropy(&p, entropy / amount, Branch::PositiveT)?.0)
    }

    fn entropy(&self, energy: f64, volume: f64, amount: f64) -> Result<f64> {
        let p = self.particle(volume)?;
        Ok(amount * max_entropy_at(&p, energy / amount)?)
    }

    fn euler(&self, entropy: f64, volume: f64, amount: f64) -> Result<f64> {
        // mu = e_1 - s T, so Eu = pV = (2/3) E for independent particles
        Ok(2.0 / 3.0 * self.energy(entropy, volume, amount)?)
    }
}

/// Particles in a cubic box through explicit `compose()` spectra.
///
/// Limited to [`COMPOSED_MAX_PARTICLES`] particles and
/// [`COMPOSED_MAX_LEVELS`] composite levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComposedBoxFamily {
    pub mass: f64,
    pub units: UnitSystem,
    /// Per-direction quantum-number cutoff of the one-particle spectrum.
    pub max_quantum_number: usize,
    /// Certification temperature of the one-particle spectrum.
    pub t_max: f64,
}

impl ComposedBoxFamily {
    pub fn composite(&self, volume: f64, amount: f64) -> Result<SpectrumModel> {
        let n = whole(amount)?;
        if n == 0 || n > COMPOSED_MAX_PARTICLES {
            return Err(Error::InvalidInput(format!(
                "composite families support 1..={COMPOSED_MAX_PARTICLES} particles"
            )));
        }
        let geom = BoxGeometry::cube(self.mass, volume.cbrt())?;
        let one = build_box(&geom, self.max_quantum_number, &self.units, Some(self.t_max))?;
        let mut acc = one.clone();
        for _ in 1..n {
            acc = compose(&acc, &one, f64::INFINITY)?;
            if acc.len() > COMPOSED_MAX_LEVELS {
                return Err(Error::InvalidInput(format!(
                    "composite exceeds {COMPOSED_MAX_LEVELS} levels; lower the quantum-number cutoff"
                )));
            }
        }
        Ok(acc)
    }
}

fn whole(amount: f64) -> Result<usize> {
    if amount >= 0.0 && amount.fract() == 0.0 && amount < 1e9 {
        Ok(amount as usize)
    } else {
        Err(Error::InvalidInput(format!("amount {amount} must be a whole number of particles")))
    }
}

impl ScalableFamily for ComposedBoxFamily {
    fn energy(&self, entropy: f64, volume: f64, amount: f64) -> Result<f64> {
        let c = self.composite(volume, amount)?;
        Ok(ses_point_of_entropy(&c, entropy, Branch::PositiveT)?.0)
    }

    fn entropy(&self, energy: f64, volume: f64, amount: f64) -> Result<f64> {
        max_entropy_at(&self.composite(volume, amount)?, energy)
    }

    fn euler(&self, entropy: f64, volume: f64, amount: f64) -> Result<f64> {
        // integer amounts rule out a derivative in n; use the factorised
        // identity Eu = pV = (2/3) E valid for independent box particles
        Ok(2.0 / 3.0 * self.energy(entropy, volume, amount)?)
    }

    fn integer_amounts(&self) -> bool {
        true
    }
}

/// Closed-form `(S_irr, W_min)` for the classical gas.
pub fn ideal_gas_partitioning(amount: f64, lambda: f64, t_ab: f64) -> (f64, f64) {
    let s_irr = amount * lambda.ln();
    let w = 1.5 * (lambda.powf(2.0 / 3.0) - 1.0) * amount * t_ab;
    (s_irr, w)
}

fn check_divisible<F: ScalableFamily + ?Sized>(family: &F, amount: f64, lambda: f64) -> Result<()> {
    if !(lambda >= 1.0 && lambda.is_finite()) {
        return Err(Error::InvalidInput(format!("lambda {lambda} must be at least 1")));
    }
    if family.integer_amounts() && ((amount / lambda).fract() != 0.0 || lambda.fract() != 0.0) {
        return Err(Error::IndivisibleScenario { amount, lambda });
    }
    Ok(())
}

/// `W = lambda E(S/lambda, V/lambda, n/lambda) - E(S, V, n)`.
pub fn generic_partitioning<F: ScalableFamily + ?Sized>(
    family: &F,
    amount: f64,
    volume: f64,
    entropy: f64,
    lambda: f64,
) -> Result<f64> {
    check_divisible(family, amount, lambda)?;
    let whole = family.energy(entropy, volume, amount)?;
    let part = family.energy(entropy / lambda, volume / lambda, amount / lambda)?;
    Ok(lambda * part - whole)
}

/// Work released by removing the partitions reversibly; the same number as
/// [`generic_partitioning`] by construction.
pub fn merge_work<F: ScalableFamily + ?Sized>(
    family: &F,
    amount: f64,
    volume: f64,
    entropy: f64,
    lambda: f64,
) -> Result<f64> {
    generic_partitioning(family, amount, volume, entropy, lambda)
}

/// Entropy generated by removing the partitions of the `lambda`-compartment
/// state without extracting work.
pub fn partition_removal_entropy<F: ScalableFamily + ?Sized>(
    family: &F,
    amount: f64,
    volume: f64,
    entropy: f64,
    lambda: f64,
) -> Result<f64> {
    check_divisible(family, amount, lambda)?;
    let e_lambda = lambda * family.energy(entropy / lambda, volume / lambda, amount / lambda)?;
    Ok(family.entropy(e_lambda, volume, amount)? - entropy)
}

/// Central difference `[W(lambda + 1) - W(lambda - 1)] / 2`.
pub fn subdivision_potential<F: ScalableFamily + ?Sized>(
    family: &F,
    amount: f64,
    volume: f64,
    entropy: f64,
    lambda: f64,
) -> Result<f64> {
    if !(lambda >= 2.0) {
        return Err(Error::InvalidInput("subdivision potential needs lambda >= 2".into()));
    }
    let up = generic_partitioning(family, amount, volume, entropy, lambda + 1.0)?;
    let down = generic_partitioning(family, amount, volume, entropy, lambda - 1.0)?;
    Ok(0.5 * (up - down))
}

/// Hill free energy of one of the `lambda` compartments.
pub fn compartment_euler<F: ScalableFamily + ?Sized>(
    family: &F,
    amount: f64,
    volume: f64,
    entropy: f64,
    lambda: f64,
) -> Result<f64> {
    family.euler(entropy / lambda, volume / lambda, amount / lambda)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionModel {
    ClosedForm,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionScenario {
    pub particles: usize,
    pub volume: f64,
    pub t_ab: f64,
    pub lambda: usize,
    pub model: PartitionModel,
    pub mass: f64,
    pub units: UnitSystem,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionReport {
    pub lambda: usize,
    pub s_irr: f64,
    pub w_min: f64,
    pub subdivision_potential: f64,
}

/// Evaluate a scenario with the closed form or the numeric box family.
pub fn evaluate_scenario(sc: &PartitionScenario) -> Result<PartitionReport> {
    if sc.particles == 0 || sc.lambda == 0 {
        return Err(Error::InvalidInput("particles and lambda must be positive".into()));
    }
    if !(sc.t_ab > 0.0) {
        return Err(Error::NonPositiveTemperature(sc.t_ab));
    }
    let (n, l) = (sc.particles as f64, sc.lambda as f64);
    match sc.model {
        PartitionModel::ClosedForm => {
            let (s_irr, w_min) = ideal_gas_partitioning(n, l, sc.t_ab);
            let w = |x: f64| ideal_gas_partitioning(n, x, sc.t_ab).1;
            let sub = if sc.lambda >= 2 { 0.5 * (w(l + 1.0) - w(l - 1.0)) } else { f64::NAN };
            Ok(PartitionReport { lambda: sc.lambda, s_irr, w_min, subdivision_potential: sub })
        }
        PartitionModel::Numeric => {
            if !sc.particles.is_multiple_of(sc.lambda) {
                return Err(Error::IndivisibleScenario { amount: n, lambda: l });
            }
            let fam = BoxGasFamily { mass: sc.mass, units: sc.units };
            let p = fam.particle(sc.volume)?;
            let s = Replicated::new(&p, n).evaluate(1.0 / sc.t_ab).entropy;
            let w_min = generic_partitioning(&fam, n, sc.volume, s, l)?;
            let s_irr = partition_removal_entropy(&fam, n, sc.volume, s, l)?;
            let sub = if sc.lambda >= 2 { subdivision_potential(&fam, n, sc.volume, s, l)? } else { f64::NAN };
            Ok(PartitionReport { lambda: sc.lambda, s_irr, w_min, subdivision_potential: sub })
        }
    }
}

/// Temperature of the `n`-particle box family state with entropy `entropy`.
pub fn box_family_temperature(fam: &BoxGasFamily, entropy: f64, volume: f64, amount: f64) -> Result<f64> {
    let p = fam.particle(volume)?;
    let (_, inv) = ses_point_of_entropy(&p, entropy / amount, Branch::PositiveT)?;
    Ok(match inv {
        EnergyInversion::Beta(b) => 1.0 / b,
        _ => 0.0,
    })
}

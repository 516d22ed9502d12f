//! Canonical stable-equilibrium states and inversion of the fundamental relation.
//!
//! Everything is parameterised by `b = 1/(k_B T)`. `E(b)` is strictly
//! decreasing over the whole domain, including through `b = 0` (infinite
//! temperature) into the negative-temperature side of bounded spectra, so all
//! inversions are monotone root problems in `b`.

mod system;

use std::sync::Arc;

pub use system::{BetaDomain, CanonicalSystem, Pair, Replicated, ThermalPoint};

use crate::error::{Error, Result};
use crate::roots::solve_decreasing;
use crate::spectra::SpectrumModel;
use crate::states::{LevelDistribution, SesEntropy};

/// Result of inverting `E(b)`: a finite `b`, or one of the two energy extremes
/// that no finite `b` reaches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnergyInversion {
    Beta(f64),
    /// `E` equals the ground energy (`b = +inf`, `T = 0+`).
    Ground,
    /// `E` equals the top of a bounded spectrum (`b = -inf`, `T = 0-`).
    Ceiling,
}

impl EnergyInversion {
    pub fn beta(&self) -> Option<f64> {
        match self {
            EnergyInversion::Beta(b) => Some(*b),
            _ => None,
        }
    }

    /// `k_B T`, signed zero at the extremes.
    pub fn temperature(&self) -> f64 {
        match self {
            EnergyInversion::Beta(b) => 1.0 / b,
            EnergyInversion::Ground => 0.0,
            EnergyInversion::Ceiling => -0.0,
        }
    }

    /// The ordering potential `-1/T = -b`.
    pub fn minus_inverse_temperature(&self) -> f64 {
        match self {
            EnergyInversion::Beta(b) => -b,
            EnergyInversion::Ground => f64::NEG_INFINITY,
            EnergyInversion::Ceiling => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    PositiveT,
    NegativeT,
}

fn check_beta<S: CanonicalSystem + ?Sized>(sys: &S, b: f64) -> Result<()> {
    if !b.is_finite() {
        return Err(Error::InvalidInput(format!("b = {b} is not finite")));
    }
    if b <= 0.0 && sys.domain() != BetaDomain::Real {
        return Err(Error::NegativeBetaUnbounded(b));
    }
    Ok(())
}

pub fn log_partition<S: CanonicalSystem + ?Sized>(sys: &S, b: f64) -> Result<f64> {
    check_beta(sys, b)?;
    Ok(sys.evaluate(b).ln_q)
}

pub fn thermal_properties<S: CanonicalSystem + ?Sized>(sys: &S, b: f64) -> Result<ThermalPoint> {
    check_beta(sys, b)?;
    Ok(sys.evaluate(b))
}

/// Canonical distribution `p_j = g_j exp(-b e_j) / Q`.
pub fn canonical_state(spectrum: &Arc<SpectrumModel>, b: f64) -> Result<LevelDistribution> {
    check_beta(spectrum.as_ref(), b)?;
    let shift = if b >= 0.0 { spectrum.ground().energy } else { spectrum.top().energy };
    let mut probs: Vec<f64> =
        spectrum.levels().iter().map(|l| l.degeneracy * (-b * (l.energy - shift)).exp()).collect();
    let z: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= z);
    Ok(LevelDistribution::from_normalized(spectrum.clone(), probs))
}

/// Canonical distribution for an inversion result, including the extremes.
pub fn canonical_state_at(spectrum: &Arc<SpectrumModel>, inv: EnergyInversion) -> Result<LevelDistribution> {
    let n = spectrum.len();
    let mut probs = vec![0.0; n];
    match inv {
        EnergyInversion::Beta(b) => return canonical_state(spectrum, b),
        EnergyInversion::Ground => probs[0] = 1.0,
        EnergyInversion::Ceiling => probs[n - 1] = 1.0,
    }
    Ok(LevelDistribution::from_normalized(spectrum.clone(), probs))
}

/// Largest energy a system can represent at stable equilibrium.
pub fn max_supported_energy<S: CanonicalSystem + ?Sized>(sys: &S) -> f64 {
    match sys.domain() {
        BetaDomain::Real => sys.ceiling().map_or(f64::INFINITY, |c| c.0),
        BetaDomain::AtLeast(b_min) => sys.evaluate(b_min).energy,
        BetaDomain::Positive => f64::INFINITY,
    }
}

/// Grow `b` geometrically from `start` until `value(b) <= target`.
fn grow_until_below<F: Fn(f64) -> f64>(value: F, target: f64, start: f64) -> Result<(f64, f64)> {
    let mut lo = start;
    let mut hi = start.max(f64::MIN_POSITIVE) * 4.0;
    while value(hi) > target {
        lo = hi;
        hi *= 4.0;
        if !hi.is_finite() {
            return Err(Error::NoBracket("no finite b reaches the target"));
        }
    }
    Ok((lo, hi))
}

/// Shrink `b > 0` geometrically until `value(b) >= target`.
fn shrink_until_above<F: Fn(f64) -> f64>(value: F, target: f64, start: f64) -> Result<f64> {
    let mut lo = start;
    while value(lo) < target {
        lo *= 0.25;
        if lo < 1e-300 {
            return Err(Error::NoBracket("target not reached as b -> 0"));
        }
    }
    Ok(lo)
}

/// The unique `b` with `E(b) = energy`.
pub fn beta_of_energy<S: CanonicalSystem + ?Sized>(sys: &S, energy: f64) -> Result<EnergyInversion> {
    let e0 = sys.ground_energy();
    let e_max = max_supported_energy(sys);
    if !(energy >= e0 && energy <= e_max) {
        return Err(Error::EnergyOutOfRange { energy, min: e0, max: e_max });
    }
    if energy == e0 {
        return Ok(EnergyInversion::Ground);
    }
    let domain = sys.domain();
    if domain == BetaDomain::Real && energy == e_max {
        return Ok(EnergyInversion::Ceiling);
    }
    let eval = |b: f64| {
        let p = sys.evaluate(b);
        Ok((p.energy, -p.variance))
    };
    let energy_at = |b: f64| sys.evaluate(b).energy;
    let scale = 1.0 / sys.energy_scale();

    let b = match domain {
        BetaDomain::Real => {
            let mid = energy_at(0.0);
            if energy == mid {
                0.0
            } else if energy < mid {
                let (_, hi) = grow_until_below(energy_at, energy, scale)?;
                solve_decreasing(eval, energy, 0.0, hi)?
            } else {
                // mirror: c = -b, E(-c) increasing in c
                let (_, hi) = grow_until_below(|c| -energy_at(-c), -energy, scale)?;
                -solve_decreasing(
                    |c| {
                        let p = sys.evaluate(-c);
                        Ok((-p.energy, -p.variance))
                    },
                    -energy,
                    0.0,
                    hi,
                )?
            }
        }
        BetaDomain::AtLeast(b_min) => {
            let (_, hi) = grow_until_below(energy_at, energy, b_min.max(scale))?;
            solve_decreasing(eval, energy, b_min, hi)?
        }
        BetaDomain::Positive => {
            let lo = shrink_until_above(energy_at, energy, scale)?;
            let (_, hi) = grow_until_below(energy_at, energy, lo)?;
            solve_decreasing(eval, energy, lo, hi)?
        }
    };
    Ok(EnergyInversion::Beta(b))
}

/// Range of stable-equilibrium entropies on a branch.
pub fn entropy_range<S: CanonicalSystem + ?Sized>(sys: &S, branch: Branch) -> Result<(f64, f64)> {
    let s_max = match sys.domain() {
        BetaDomain::Real => sys.ln_total_degeneracy().unwrap_or(f64::INFINITY),
        BetaDomain::AtLeast(b_min) => sys.evaluate(b_min).entropy,
        BetaDomain::Positive => f64::INFINITY,
    };
    match branch {
        Branch::PositiveT => Ok((sys.ln_ground_degeneracy(), s_max)),
        Branch::NegativeT => match sys.ceiling() {
            Some((_, ln_g)) if sys.domain() == BetaDomain::Real => Ok((ln_g, s_max)),
            _ => Err(Error::BranchUnavailable),
        },
    }
}

/// Energy of the stable-equilibrium state with entropy `entropy` on `branch`.
pub fn ses_energy_of_entropy<S: CanonicalSystem + ?Sized>(sys: &S, entropy: f64, branch: Branch) -> Result<f64> {
    ses_point_of_entropy(sys, entropy, branch).map(|(e, _)| e)
}

/// Energy and inversion result of the stable-equilibrium state at `entropy`.
pub fn ses_point_of_entropy<S: CanonicalSystem + ?Sized>(
    sys: &S,
    entropy: f64,
    branch: Branch,
) -> Result<(f64, EnergyInversion)> {
    let (s_min, s_max) = entropy_range(sys, branch)?;
    let tol = 1e-12 * s_max.abs().max(1.0);
    if !(entropy >= s_min - tol && entropy <= s_max + tol) {
        return Err(Error::EntropyOutOfRange { entropy, min: s_min, max: s_max });
    }
    if entropy <= s_min {
        return Ok(match branch {
            Branch::PositiveT => (sys.ground_energy(), EnergyInversion::Ground),
            Branch::NegativeT => (sys.ceiling().map(|c| c.0).unwrap_or(f64::NAN), EnergyInversion::Ceiling),
        });
    }
    let domain = sys.domain();
    if domain == BetaDomain::Real && entropy >= s_max {
        return Ok((sys.evaluate(0.0).energy, EnergyInversion::Beta(0.0)));
    }
    // sign = +1 solves in b on the positive side, -1 in c = -b on the negative side
    let sign = if branch == Branch::PositiveT { 1.0 } else { -1.0 };
    let entropy_at = |c: f64| sys.evaluate(sign * c).entropy;
    let eval = |c: f64| {
        let p = sys.evaluate(sign * c);
        Ok((p.entropy, -c * p.variance))
    };
    let scale = 1.0 / sys.energy_scale();
    let (lo, start) = match domain {
        BetaDomain::Real => (0.0, scale),
        BetaDomain::AtLeast(b_min) => (b_min, b_min.max(scale)),
        BetaDomain::Positive => {
            let lo = shrink_until_above(entropy_at, entropy, scale)?;
            (lo, lo)
        }
    };
    let (_, hi) = grow_until_below(entropy_at, entropy, start)?;
    let c = solve_decreasing(eval, entropy, lo, hi)?;
    let b = sign * c;
    Ok((sys.evaluate(b).energy, EnergyInversion::Beta(b)))
}

/// `S_ses(E)`: the maximum entropy compatible with energy `energy`.
pub fn max_entropy_at<S: CanonicalSystem + ?Sized>(sys: &S, energy: f64) -> Result<f64> {
    Ok(match beta_of_energy(sys, energy)? {
        EnergyInversion::Beta(b) => sys.evaluate(b).entropy,
        EnergyInversion::Ground => sys.ln_ground_degeneracy(),
        EnergyInversion::Ceiling => sys.ceiling().map(|c| c.1).unwrap_or(f64::NAN),
    })
}

/// Maximum-entropy split of a total energy between two systems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Split {
    pub energy_a: f64,
    pub energy_b: f64,
    pub beta: EnergyInversion,
}

/// Split `total` so that `S_a(E_a) + S_b(total - E_a)` is maximal.
///
/// At the optimum both systems share the same `b`, so the split is found by
/// inverting the joint `E_a(b) + E_b(b)`.
pub fn equilibrium_split<A, B>(a: &A, b: &B, total: f64) -> Result<Split>
where
    A: CanonicalSystem + ?Sized,
    B: CanonicalSystem + ?Sized,
{
    let pair = Pair { a, b };
    let beta = beta_of_energy(&pair, total)?;
    let (energy_a, energy_b) = match beta {
        EnergyInversion::Beta(x) => (a.evaluate(x).energy, b.evaluate(x).energy),
        EnergyInversion::Ground => (a.ground_energy(), b.ground_energy()),
        EnergyInversion::Ceiling => {
            let (ca, cb) = (a.ceiling(), b.ceiling());
            (ca.map_or(f64::NAN, |c| c.0), cb.map_or(f64::NAN, |c| c.0))
        }
    };
    Ok(Split { energy_a, energy_b, beta })
}

/// [`SesEntropy`] backed by the canonical inversion.
#[derive(Debug, Clone, Copy, Default)]
pub struct Canonical;

impl SesEntropy for Canonical {
    fn max_entropy(&self, spectrum: &SpectrumModel, energy: f64) -> Result<f64> {
        max_entropy_at(spectrum, energy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{build_finite, build_oscillator};

    fn two_level() -> SpectrumModel {
        build_finite(&[(0.0, 1.0), (1.0, 1.0)]).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn two_level_partition() {
        let s = two_level();
        assert!(close(log_partition(&s, 1.0).unwrap(), (1.0 + (-1f64).exp()).ln(), 1e-15));
        assert!(close(log_partition(&s, 0.0).unwrap(), 2f64.ln(), 1e-15));
    }

    #[test]
    fn no_overflow_at_large_exponents() {
        let s = build_finite(&[(-3.0, 1.0), (0.0, 2.0), (5.0, 1.0)]).unwrap();
        for &b in &[1e4 / 3.0, -1e4 / 5.0, 2000.0, -2000.0] {
            let p = thermal_properties(&s, b).unwrap();
            assert!(p.ln_q.is_finite() && p.energy.is_finite() && p.entropy.is_finite());
        }
        assert!(close(log_partition(&s, 1e4 / 3.0).unwrap(), 1e4, 1e-9));
    }

    #[test]
    fn negative_beta_needs_bounded() {
        let osc = build_oscillator(1.0, 300, None).unwrap();
        assert_eq!(log_partition(&osc, -0.5).unwrap_err().name(), "NegativeBetaUnbounded");
    }

    #[test]
    fn canonical_populations() {
        let s = Arc::new(two_level());
        let p = canonical_state(&s, 1.0).unwrap();
        assert!(close(p.probs()[0], 0.731059, 1e-6));
        let p = canonical_state(&s, -(3f64.ln())).unwrap();
        assert!(close(p.probs()[0], 0.25, 1e-15) && close(p.probs()[1], 0.75, 1e-15));
        let p = canonical_state(&s, 0.0).unwrap();
        assert_eq!(p.probs(), &[0.5, 0.5]);
    }

    #[test]
    fn two_level_thermal_point() {
        let p = thermal_properties(&two_level(), 1.0).unwrap();
        assert!(close(p.energy, 0.268941, 1e-6));
        assert!(close(p.entropy, 0.582203, 1e-6));
        assert!(close(p.entropy, p.b * p.energy + p.ln_q, 1e-14));
    }

    #[test]
    fn inversion_examples() {
        let s = two_level();
        assert_eq!(beta_of_energy(&s, 0.5).unwrap(), EnergyInversion::Beta(0.0));
        let b = beta_of_energy(&s, 0.75).unwrap().beta().unwrap();
        assert!(close(b, -(3f64.ln()), 1e-14));
        assert!(close(1.0 / b, -0.910239, 1e-6));
        let e1 = thermal_properties(&s, 1.0).unwrap().energy;
        assert!(close(beta_of_energy(&s, e1).unwrap().beta().unwrap(), 1.0, 1e-14));
        assert_eq!(beta_of_energy(&s, 0.0).unwrap(), EnergyInversion::Ground);
        assert_eq!(beta_of_energy(&s, 1.0).unwrap(), EnergyInversion::Ceiling);
        assert_eq!(beta_of_energy(&s, 1.5).unwrap_err().name(), "EnergyOutOfRange");
    }

    #[test]
    fn entropy_inversion_examples() {
        let s = two_level();
        let ln2 = 2f64.ln();
        assert!(close(ses_energy_of_entropy(&s, ln2, Branch::PositiveT).unwrap(), 0.5, 1e-15));
        assert!(close(ses_energy_of_entropy(&s, ln2, Branch::NegativeT).unwrap(), 0.5, 1e-15));
        assert_eq!(ses_energy_of_entropy(&s, 0.0, Branch::PositiveT).unwrap(), 0.0);
        let s_quarter = -(0.75f64 * 0.75f64.ln() + 0.25 * 0.25f64.ln());
        assert!(close(ses_energy_of_entropy(&s, s_quarter, Branch::PositiveT).unwrap(), 0.25, 1e-12));
        assert!(close(ses_energy_of_entropy(&s, s_quarter, Branch::NegativeT).unwrap(), 0.75, 1e-12));
        assert_eq!(ses_energy_of_entropy(&s, 0.8, Branch::PositiveT).unwrap_err().name(), "EntropyOutOfRange");
        let osc = build_oscillator(1.0, 300, None).unwrap();
        assert_eq!(ses_energy_of_entropy(&osc, 0.5, Branch::NegativeT).unwrap_err().name(), "BranchUnavailable");
    }

    #[test]
    fn symmetric_split() {
        let s = two_level();
        let sp = equilibrium_split(&s, &s, 1.0).unwrap();
        assert_eq!(sp.beta, EnergyInversion::Beta(0.0));
        assert!(close(sp.energy_a, 0.5, 1e-15) && close(sp.energy_b, 0.5, 1e-15));
    }

    #[test]
    fn third_law_endpoint() {
        let s = build_finite(&[(0.0, 4.0), (1.0, 1.0)]).unwrap();
        let p = thermal_properties(&s, 200.0).unwrap();
        assert!(close(p.entropy, 4f64.ln(), 1e-12));
        assert!(close(max_entropy_at(&s, 0.0).unwrap(), 4f64.ln(), 0.0));
    }
}

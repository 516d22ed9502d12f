//! Bounds on the entropy that can accompany an exchange of energy, volume or
//! constituent between two systems, and related second-law checks.
//!
//! Exchanges are oriented from system A to system B. Temperatures enter only
//! through `1/T`, so negative temperatures of bounded spectra are handled by
//! the same formulas wherever the physics permits.

use crate::equilibrium::{max_entropy_at, Canonical, CanonicalSystem};
use crate::error::{Error, Result};
use crate::states::{LevelDistribution, SesEntropy};

/// Stable-equilibrium endpoint of an exchange.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Endpoint {
    pub temperature: f64,
    pub pressure: Option<f64>,
    pub mu: Option<f64>,
}

impl Endpoint {
    pub fn thermal(temperature: f64) -> Self {
        Endpoint { temperature, pressure: None, mu: None }
    }

    pub fn with_pressure(mut self, p: f64) -> Self {
        self.pressure = Some(p);
        self
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = Some(mu);
        self
    }
}

/// Proposed infinitesimal exchange from A to B.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExchangeProposal {
    pub de: f64,
    pub ds: Option<f64>,
    pub dv: Option<f64>,
    pub dn: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferBounds {
    /// Least entropy A must send along with the exchange.
    pub lower: f64,
    /// Most entropy B can absorb.
    pub upper: f64,
    pub admissible: bool,
    /// Range of energy transfers compatible with zero entropy transfer, when
    /// volume is exchanged and `ds = 0` was proposed.
    pub work_window: Option<(f64, f64)>,
}

fn check_temperature(t: f64) -> Result<()> {
    if t == 0.0 {
        Err(Error::ZeroTemperature)
    } else if !t.is_finite() {
        Err(Error::InvalidInput(format!("temperature {t} is not finite")))
    } else {
        Ok(())
    }
}

fn field(v: Option<f64>, name: &'static str) -> Result<f64> {
    v.ok_or(Error::KindFieldMissing { kind: "endpoint", field: name })
}

/// `p dV - mu dn` contribution of an endpoint.
fn work_terms(e: &Endpoint, proposal: &ExchangeProposal) -> Result<f64> {
    let mut c = 0.0;
    if let Some(dv) = proposal.dv {
        c += field(e.pressure, "p")? * dv;
    }
    if let Some(dn) = proposal.dn {
        c -= field(e.mu, "mu")? * dn;
    }
    Ok(c)
}

/// The entropy train `(dE + p_A dV - mu_A dn)/T_A <= dS <= (dE + p_B dV - mu_B dn)/T_B`.
///
/// The train holds as written for either sign of `dE` and of the
/// temperatures: the lower end is the entropy-generation condition inside A,
/// the upper end the one inside B. An empty interval means no entropy
/// transfer makes the proposal possible.
pub fn transfer_bounds(a: &Endpoint, b: &Endpoint, proposal: &ExchangeProposal) -> Result<TransferBounds> {
    check_temperature(a.temperature)?;
    check_temperature(b.temperature)?;
    let (ca, cb) = (work_terms(a, proposal)?, work_terms(b, proposal)?);
    let lower = (proposal.de + ca) / a.temperature;
    let upper = (proposal.de + cb) / b.temperature;
    let admissible = match proposal.ds {
        Some(ds) => {
            let tol = 1e-12 * lower.abs().max(upper.abs());
            ds >= lower - tol && ds <= upper + tol
        }
        None => lower <= upper,
    };
    let work_window = match (proposal.ds, proposal.dv) {
        (Some(0.0), Some(_)) => zero_entropy_window(a.temperature, ca, b.temperature, cb),
        _ => None,
    };
    Ok(TransferBounds { lower, upper, admissible, work_window })
}

/// Energy transfers `dE` with `(dE + c_A)/T_A <= 0 <= (dE + c_B)/T_B`.
fn zero_entropy_window(t_a: f64, c_a: f64, t_b: f64, c_b: f64) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    if t_a > 0.0 {
        hi = hi.min(-c_a);
    } else {
        lo = lo.max(-c_a);
    }
    if t_b > 0.0 {
        lo = lo.max(-c_b);
    } else {
        hi = hi.min(-c_b);
    }
    (lo <= hi).then_some((lo, hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Allowed,
    Forbidden,
}

/// Whether energy `de` may pass from A to B as heat: `(1/T_A - 1/T_B) de <= 0`.
pub fn clausius_direction(t_a: f64, t_b: f64, de: f64) -> Result<Direction> {
    check_temperature(t_a)?;
    check_temperature(t_b)?;
    Ok(if (1.0 / t_a - 1.0 / t_b) * de <= 0.0 { Direction::Allowed } else { Direction::Forbidden })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteBounds {
    pub s_min: f64,
    pub s_max: f64,
    pub admissible: bool,
}

/// Entropy bounds for a finite energy transfer between two stable-equilibrium
/// systems with initial energies `e_a`, `e_b`.
pub fn transfer_bounds_finite<A, B>(a: &A, e_a: f64, b: &B, e_b: f64, transfer: f64) -> Result<FiniteBounds>
where
    A: CanonicalSystem + ?Sized,
    B: CanonicalSystem + ?Sized,
{
    let s_min = max_entropy_at(a, e_a)? - max_entropy_at(a, e_a - transfer)?;
    let s_max = max_entropy_at(b, e_b + transfer)? - max_entropy_at(b, e_b)?;
    Ok(FiniteBounds { s_min, s_max, admissible: s_min <= s_max })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonequilibriumBounds {
    pub s_min: f64,
    pub s_max: f64,
    pub admissible: bool,
    pub disequilibrium_a: f64,
    pub disequilibrium_b: f64,
    /// `[-D_a, D_b]`, the entropy that can move with no energy, for a zero transfer.
    pub pure_entropy_window: Option<(f64, f64)>,
}

/// Entropy bounds for a finite energy transfer between arbitrary states.
pub fn transfer_bounds_nonequilibrium(
    a: &LevelDistribution,
    b: &LevelDistribution,
    transfer: f64,
) -> Result<NonequilibriumBounds> {
    let (spec_a, spec_b) = (a.spectrum().as_ref(), b.spectrum().as_ref());
    let (e_a, e_b) = (a.energy(), b.energy());
    let (s_a, s_b) = (a.entropy(), b.entropy());
    let disequilibrium_a = (Canonical.max_entropy(spec_a, e_a)? - s_a).max(0.0);
    let disequilibrium_b = (Canonical.max_entropy(spec_b, e_b)? - s_b).max(0.0);
    let s_min = s_a - max_entropy_at(spec_a, e_a - transfer)?;
    let s_max = max_entropy_at(spec_b, e_b + transfer)? - s_b;
    Ok(NonequilibriumBounds {
        s_min,
        s_max,
        admissible: s_min <= s_max,
        disequilibrium_a,
        disequilibrium_b,
        pure_entropy_window: (transfer == 0.0).then_some((-disequilibrium_a, disequilibrium_b)),
    })
}

/// Largest work a machine between A and B can deliver when `de` leaves A
/// (and, optionally, `dn` moves from A to B).
pub fn max_work_interposed(a: &Endpoint, b: &Endpoint, de: f64, dn: Option<f64>) -> Result<f64> {
    for t in [a.temperature, b.temperature] {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::TemperatureSign(t));
        }
    }
    let ratio = b.temperature / a.temperature;
    let mut w = (1.0 - ratio) * de;
    if let Some(dn) = dn {
        w += (field(a.mu, "mu")? * ratio - field(b.mu, "mu")?) * dn;
    }
    Ok(w)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatSplit {
    pub dq: f64,
    pub ds: f64,
}

/// Measurable heat `dQ = dE - h dn + p dV` (with `dV` leaving the system) and
/// the accompanying entropy `dQ/T + s dn`.
pub fn measurable_heat_split(
    t1: f64,
    partial_h: f64,
    partial_s: f64,
    de: f64,
    dn: f64,
    dv: Option<f64>,
    p1: Option<f64>,
) -> Result<HeatSplit> {
    if !(t1 > 0.0 && t1.is_finite()) {
        return Err(Error::NonPositiveTemperature(t1));
    }
    let mut dq = de - partial_h * dn;
    if let Some(dv) = dv {
        dq += field(p1, "p")? * dv;
    }
    Ok(HeatSplit { dq, ds: dq / t1 + partial_s * dn })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleVerdict {
    pub lhs: f64,
    pub satisfied: bool,
}

fn verdict(terms: impl Iterator<Item = f64>) -> CycleVerdict {
    let (mut lhs, mut scale) = (0.0, 0.0);
    for t in terms {
        lhs += t;
        scale += t.abs();
    }
    CycleVerdict { lhs, satisfied: lhs >= -1e-12 * scale }
}

/// Clausius inequality `sum Q_out/T >= 0` over the heat records of a cycle.
pub fn clausius_cycle_check(records: &[(f64, f64)]) -> Result<CycleVerdict> {
    if let Some(&(_, t)) = records.iter().find(|(_, t)| !(*t > 0.0)) {
        return Err(Error::NonPositiveTemperature(t));
    }
    Ok(verdict(records.iter().map(|(q, t)| q / t)))
}

/// Heat outflow rate and boundary temperature of one channel, sampled on a
/// common time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledChannel {
    pub rates: Vec<f64>,
    pub temperatures: Vec<f64>,
}

/// Trapezoidal version of [`clausius_cycle_check`] for sampled rates.
pub fn clausius_cycle_sampled(times: &[f64], channels: &[SampledChannel]) -> Result<CycleVerdict> {
    for c in channels {
        if c.rates.len() != times.len() || c.temperatures.len() != times.len() {
            return Err(Error::LengthMismatch {
                expected: times.len(),
                found: c.rates.len().min(c.temperatures.len()),
            });
        }
        if let Some(&t) = c.temperatures.iter().find(|t| !(**t > 0.0)) {
            return Err(Error::NonPositiveTemperature(t));
        }
    }
    let integrand = |k: usize| channels.iter().map(|c| c.rates[k] / c.temperatures[k]).sum::<f64>();
    Ok(verdict(times.windows(2).enumerate().map(|(k, w)| 0.5 * (w[1] - w[0]) * (integrand(k) + integrand(k + 1)))))
}

/// Entropy production density of steady conduction, from the flux and from
/// the temperature gradient.
pub fn conduction_sigma(q_flux: f64, k_cond: f64, t: f64, dt_dx: f64) -> Result<(f64, f64)> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTemperature(t));
    }
    if !(k_cond > 0.0) {
        return Err(Error::InvalidInput(format!("conductivity {k_cond} must be positive")));
    }
    Ok((q_flux * q_flux / (k_cond * t * t), k_cond * dt_dx * dt_dx / (t * t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::build_finite;

    #[test]
    fn reservoir_pair_interval() {
        let p = ExchangeProposal { de: 12.0, ..Default::default() };
        let r = transfer_bounds(&Endpoint::thermal(400.0), &Endpoint::thermal(300.0), &p).unwrap();
        assert_eq!((r.lower, r.upper), (0.03, 0.04));
        assert!(r.admissible);
    }

    #[test]
    fn heat_limit_collapses() {
        let p = ExchangeProposal { de: 3.0, ds: Some(0.01), ..Default::default() };
        let r = transfer_bounds(&Endpoint::thermal(300.0), &Endpoint::thermal(300.0), &p).unwrap();
        assert_eq!(r.lower, r.upper);
        assert!(r.admissible);
    }

    #[test]
    fn cold_to_hot_rejected() {
        let p = ExchangeProposal { de: 1.0, ds: Some(0.0), ..Default::default() };
        let r = transfer_bounds(&Endpoint::thermal(300.0), &Endpoint::thermal(400.0), &p).unwrap();
        assert!(!r.admissible);
        assert_eq!(clausius_direction(300.0, 400.0, 1.0).unwrap(), Direction::Forbidden);
        assert_eq!(clausius_direction(400.0, 300.0, 1.0).unwrap(), Direction::Allowed);
        assert_eq!(clausius_direction(-1.0, 1.0, 1.0).unwrap(), Direction::Allowed);
        assert_eq!(clausius_direction(0.0, 1.0, 1.0).unwrap_err().name(), "ZeroTemperature");
    }

    #[test]
    fn piston_window() {
        let a = Endpoint::thermal(2.0).with_pressure(3.0);
        let b = Endpoint::thermal(1.0).with_pressure(1.0);
        let p = ExchangeProposal { de: 0.0, ds: Some(0.0), dv: Some(1.0), dn: None };
        let r = transfer_bounds(&a, &b, &p).unwrap();
        // dE <= -p_A dV = -3 and dE >= -p_B dV = -1 cannot both hold
        assert_eq!(r.work_window, None);
        let p = ExchangeProposal { dv: Some(-1.0), ..p };
        assert_eq!(transfer_bounds(&a, &b, &p).unwrap().work_window, Some((1.0, 3.0)));
    }

    #[test]
    fn finite_two_level() {
        let s = build_finite(&[(0.0, 1.0), (1.0, 1.0)]).unwrap();
        let h = |e: f64| -(e * e.ln() + (1.0 - e) * (1.0 - e).ln());
        let r = transfer_bounds_finite(&s, 0.75, &s, 0.25, 0.25).unwrap();
        assert!((r.s_min - (h(0.75) - h(0.5))).abs() < 1e-12);
        assert!((r.s_max - (h(0.5) - h(0.25))).abs() < 1e-12);
        assert!(r.admissible);
        let z = transfer_bounds_finite(&s, 0.4, &s, 0.4, 0.0).unwrap();
        assert_eq!((z.s_min, z.s_max), (0.0, 0.0));
        assert_eq!(transfer_bounds_finite(&s, 0.75, &s, 0.25, 0.8).unwrap_err().name(), "EnergyOutOfRange");
    }

    #[test]
    fn interposed_machine() {
        let w = max_work_interposed(&Endpoint::thermal(2.0), &Endpoint::thermal(1.0), 1.0, None).unwrap();
        assert_eq!(w, 0.5);
        let a = Endpoint::thermal(1.0).with_mu(0.2);
        let b = Endpoint::thermal(1.0).with_mu(0.1);
        assert!((max_work_interposed(&a, &b, 0.0, Some(1.0)).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(max_work_interposed(&Endpoint::thermal(-1.0), &b, 1.0, None).unwrap_err().name(), "TemperatureSign");
    }

    #[test]
    fn heat_and_diffusion() {
        let r = measurable_heat_split(1.0, 2.0, 0.5, 3.0, 1.0, None, None).unwrap();
        assert_eq!((r.dq, r.ds), (1.0, 1.5));
        let r = measurable_heat_split(2.0, 0.0, 0.0, 3.0, 0.0, None, None).unwrap();
        assert_eq!((r.dq, r.ds), (3.0, 1.5));
    }

    #[test]
    fn cycles() {
        assert_eq!(clausius_cycle_check(&[(1.0, 1.0)]).unwrap(), CycleVerdict { lhs: 1.0, satisfied: true });
        assert!(clausius_cycle_check(&[(2.0, 1.0), (-1.0, 0.5)]).unwrap().satisfied);
        let v = clausius_cycle_check(&[(1.0, 2.0), (-1.0, 1.0)]).unwrap();
        assert_eq!(v.lhs, -0.5);
        assert!(!v.satisfied);
        assert_eq!(clausius_cycle_check(&[(1.0, 0.0)]).unwrap_err().name(), "NonPositiveTemperature");
    }

    #[test]
    fn sampled_cycle_matches_discrete_for_steps() {
        let times = [0.0, 1.0, 2.0];
        let ch = SampledChannel { rates: vec![2.0, 2.0, 2.0], temperatures: vec![4.0, 4.0, 4.0] };
        let v = clausius_cycle_sampled(&times, &[ch]).unwrap();
        assert_eq!(v.lhs, 1.0);
    }

    #[test]
    fn conduction() {
        let (f, _) = conduction_sigma(100.0, 1.0, 300.0, 0.0).unwrap();
        assert!((f - 1.0 / 9.0).abs() < 1e-15);
        assert_eq!(conduction_sigma(0.0, 1.0, 300.0, 0.0).unwrap(), (0.0, 0.0));
        assert_eq!(conduction_sigma(10.0, 2.0, 10.0, -5.0).unwrap(), (0.5, 0.5));
    }
}

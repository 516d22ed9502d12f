//! Seeded invariant suites behind `ses verify`.
//!
//! Every suite draws from its own ChaCha stream derived from the run seed, so
//! a suite's counts depend only on the seed and never on which other suites
//! ran.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::availability::{adiabatic_availability, available_energy, ergotropy, Reservoir};
use crate::diagram::ses_curve;
use crate::equilibrium::{beta_of_energy, thermal_properties, CanonicalSystem};
use crate::error::{Error, Result};
use crate::interactions::{clausius_direction, transfer_bounds, Direction, Endpoint, ExchangeProposal};
use crate::partitioning::{generic_partitioning, ideal_gas_partitioning, IdealGasFamily};
use crate::spectra::{build_finite, build_oscillator_auto, compose, SpectrumModel};
use crate::states::{make_state, LevelDistribution};
use crate::units::UnitSystem;

pub const SUITES: [&str; 7] =
    ["spectra", "equilibrium", "availability", "ergotropy", "interactions", "partitioning", "diagram"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn failed(&self) -> usize {
        self.suites.iter().map(|s| s.failed).sum()
    }
}

struct Tally {
    passed: usize,
    failed: usize,
}

impl Tally {
    fn check(&mut self, ok: bool) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
    }

    fn check_result(&mut self, r: Result<bool>) {
        self.check(matches!(r, Ok(true)));
    }
}

fn stream(seed: u64, suite: &str) -> ChaCha8Rng {
    let salt = suite.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, c| (h ^ c as u64).wrapping_mul(0x100_0000_01b3));
    ChaCha8Rng::seed_from_u64(seed ^ salt)
}

/// Spectrum with ground at 0, up to `max_levels` levels and integer degeneracies.
pub fn random_spectrum<R: Rng>(rng: &mut R, max_levels: usize, max_degeneracy: u32) -> SpectrumModel {
    let n = rng.gen_range(2..=max_levels);
    let mut levels = vec![(0.0, rng.gen_range(1..=max_degeneracy) as f64)];
    let mut e = 0.0;
    for _ in 1..n {
        e += rng.gen_range(0.05..0.6);
        levels.push((e, rng.gen_range(1..=max_degeneracy) as f64));
    }
    build_finite(&levels).expect("generated levels are valid")
}

/// Probabilities drawn uniformly from the simplex.
pub fn random_state<R: Rng>(rng: &mut R, spectrum: Arc<SpectrumModel>) -> LevelDistribution {
    let w: Vec<f64> = (0..spectrum.len()).map(|_| -rng.gen_range(f64::EPSILON..1.0f64).ln()).collect();
    let total: f64 = w.iter().sum();
    make_state(spectrum, w.iter().map(|x| x / total).collect()).expect("simplex sample is a state")
}

/// Least energy over all reassignments of the probabilities to the levels.
pub fn brute_force_passive_energy(energies: &[f64], probs: &[f64]) -> f64 {
    fn go(k: usize, perm: &mut Vec<usize>, energies: &[f64], probs: &[f64], best: &mut f64) {
        if k == perm.len() {
            let e: f64 = perm.iter().zip(energies).map(|(&i, e)| probs[i] * e).sum();
            *best = best.min(e);
            return;
        }
        for j in k..perm.len() {
            perm.swap(k, j);
            go(k + 1, perm, energies, probs, best);
            perm.swap(k, j);
        }
    }
    let mut perm: Vec<usize> = (0..probs.len()).collect();
    let mut best = f64::INFINITY;
    go(0, &mut perm, energies, probs, &mut best);
    best
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn spectra_suite(rng: &mut ChaCha8Rng, t: &mut Tally) {
    for _ in 0..50 {
        let a = random_spectrum(rng, 6, 3);
        let b = random_spectrum(rng, 6, 3);
        t.check(a.levels().windows(2).all(|w| w[0].energy < w[1].energy));
        t.check_result(compose(&a, &b, f64::INFINITY).map(|c| {
            close(c.total_degeneracy(), a.total_degeneracy() * b.total_degeneracy(), 1e-12)
                && c.ground().energy == a.ground().energy + b.ground().energy
        }));
    }
    for _ in 0..20 {
        let temp = rng.gen_range(0.05..10.0);
        t.check_result(build_oscillator_auto(1.0, 10.0, 1e-12).map(|osc| {
            let p = osc.evaluate(1.0 / temp);
            let x: f64 = 1.0 / temp;
            let occ = 1.0 / x.exp_m1();
            close(p.energy, 0.5 + occ, 1e-10) && close(p.variance, occ * (1.0 + occ), 1e-10)
        }));
    }
}

fn equilibrium_suite(rng: &mut ChaCha8Rng, t: &mut Tally) {
    for _ in 0..40 {
        let s = random_spectrum(rng, 7, 3);
        for _ in 0..5 {
            let b = rng.gen_range(0.05..20.0);
            let e = s.evaluate(b).energy;
            t.check_result(beta_of_energy(&s, e).map(|inv| inv.beta().is_some_and(|x| close(x, b, 1e-7))));
        }
        let grid: Vec<_> = (0..60).map(|i| s.evaluate(-8.0 + 16.0 * i as f64 / 59.0)).collect();
        // secant slopes of S(E) track b, so they grow along the b grid
        let slopes: Vec<f64> =
            grid.windows(2).map(|w| (w[1].entropy - w[0].entropy) / (w[1].energy - w[0].energy)).collect();
        t.check(slopes.windows(2).all(|w| w[1] >= w[0] - 1e-9));
    }
}

fn availability_suite(rng: &mut ChaCha8Rng, t: &mut Tally) {
    for _ in 0..200 {
        let sp = Arc::new(random_spectrum(rng, 7, 3));
        let st = random_state(rng, sp);
        let t_r = rng.gen_range(0.1..5.0);
        let ok = (|| -> Result<bool> {
            let erg = ergotropy(&st);
            let psi = adiabatic_availability(&st)?;
            let omega = available_energy(&st, &Reservoir::thermal(t_r)?)?;
            let tol = 1e-10;
            Ok(erg >= 0.0 && erg <= psi + tol && psi <= omega + tol)
        })();
        t.check_result(ok);
    }
}

fn ergotropy_suite(rng: &mut ChaCha8Rng, t: &mut Tally) {
    for _ in 0..100 {
        let sp = Arc::new(random_spectrum(rng, 7, 1));
        let st = random_state(rng, sp.clone());
        let energies: Vec<f64> = sp.energies().collect();
        let passive = brute_force_passive_energy(&energies, st.probs());
        t.check(close(ergotropy(&st), (st.energy() - passive).max(0.0), 1e-12));
    }
}

fn interactions_suite(rng: &mut ChaCha8Rng, t: &mut Tally) {
    let temperature = |rng: &mut ChaCha8Rng| {
        let m = rng.gen_range(0.1..10.0);
        if rng.gen_bool(0.25) {
            -m
        } else {
            m
        }
    };
    for _ in 0..1000 {
        let (ta, tb) = (temperature(rng), temperature(rng));
        let de = rng.gen_range(-5.0..5.0);
        let p = ExchangeProposal { de, ..Default::default() };
        let ok = (|| -> Result<bool> {
            let bounds = transfer_bounds(&Endpoint::thermal(ta), &Endpoint::thermal(tb), &p)?;
            let dir = clausius_direction(ta, tb, de)?;
            Ok(bounds.admissible == (dir == Direction::Allowed))
        })();
        t.check_result(ok);
    }
}

fn partitioning_suite(rng: &mut ChaCha8Rng, t: &mut Tally) {
    let fam = IdealGasFamily { mass: 1.0, units: UnitSystem::reduced() };
    for _ in 0..40 {
        let n = rng.gen_range(1..=6) as f64;
        let lambda = [2.0, 3.0, 4.0, 8.0][rng.gen_range(0..4)];
        let temp = rng.gen_range(0.5..5.0);
        let v = rng.gen_range(0.5..4.0);
        let s = fam.entropy_at_temperature(temp, v, n);
        let exact = ideal_gas_partitioning(n, lambda, temp).1;
        t.check_result(generic_partitioning(&fam, n, v, s, lambda).map(|w| close(w, exact, 1e-10)));
    }
}

fn diagram_suite(rng: &mut ChaCha8Rng, t: &mut Tally) {
    for _ in 0..30 {
        let s = random_spectrum(rng, 7, 3);
        let ok = ses_curve(&s, 64, true).map(|c| {
            let increasing = c.points.windows(2).all(|w| w[0].energy < w[1].energy);
            let peak = c.peak();
            let rise = c.points[..=peak].windows(2).all(|w| w[1].entropy >= w[0].entropy - 1e-12);
            let fall = c.points[peak..].windows(2).all(|w| w[1].entropy <= w[0].entropy + 1e-12);
            increasing && rise && fall
        });
        t.check_result(ok);
        let b = rng.gen_range(0.1..5.0);
        t.check_result(thermal_properties(&s, b).map(|p| p.entropy <= s.ln_total_degeneracy() + 1e-12));
    }
}

/// Run one named suite.
pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    let mut rng = stream(seed, name);
    let mut t = Tally { passed: 0, failed: 0 };
    match name {
        "spectra" => spectra_suite(&mut rng, &mut t),
        "equilibrium" => equilibrium_suite(&mut rng, &mut t),
        "availability" => availability_suite(&mut rng, &mut t),
        "ergotropy" => ergotropy_suite(&mut rng, &mut t),
        "interactions" => interactions_suite(&mut rng, &mut t),
        "partitioning" => partitioning_suite(&mut rng, &mut t),
        "diagram" => diagram_suite(&mut rng, &mut t),
        other => return Err(Error::InvalidInput(format!("unknown suite '{other}'"))),
    }
    Ok(SuiteReport { name: name.to_string(), passed: t.passed, failed: t.failed })
}

/// Run the named suite, or all of them.
pub fn run(suite: Option<&str>, seed: u64) -> Result<VerifyReport> {
    let suites = match suite {
        Some(name) => vec![run_suite(name, seed)?],
        None => SUITES.iter().map(|n| run_suite(n, seed)).collect::<Result<_>>()?,
    };
    Ok(VerifyReport { seed, suites })
}

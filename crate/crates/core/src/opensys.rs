//! Grand-canonical properties of a single-species open system.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::equilibrium::CanonicalSystem;
use crate::error::{Error, Result};
use crate::roots::solve_decreasing;
use crate::spectra::{compose, BoxGeometry, SeparableBox, SpectrumFile, SpectrumModel, TAIL_LIMIT};
use crate::units::{UnitMode, UnitSystem};

/// How level energies depend on the volume.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VolumeScaling {
    /// `e ~ V^(-2/3)`, so `de/dV = -(2/3) e / V`.
    Box,
    /// Levels independent of the volume.
    None,
}

/// Rectangle of `(b, mu)` values on which the model is certified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingBox {
    pub b: [f64; 2],
    pub mu: [f64; 2],
}

impl OperatingBox {
    pub fn contains(&self, b: f64, mu: f64) -> bool {
        b >= self.b[0] && b <= self.b[1] && mu >= self.mu[0] && mu <= self.mu[1]
    }
}

/// One-particle system whose independent copies fill the `z`-particle sectors.
#[derive(Debug, Clone, PartialEq)]
pub enum SingleParticle {
    Spectrum(Arc<SpectrumModel>),
    Box(SeparableBox),
}

impl SingleParticle {
    fn evaluate(&self, b: f64) -> (f64, f64) {
        let p = match self {
            SingleParticle::Spectrum(s) => s.evaluate(b),
            SingleParticle::Box(sb) => sb.evaluate(b),
        };
        (p.ln_q, p.energy)
    }

    fn scaled_energies(&self, factor: f64, new_volume: f64) -> Result<SingleParticle> {
        Ok(match self {
            SingleParticle::Spectrum(s) => SingleParticle::Spectrum(Arc::new(s.scaled(factor)?)),
            SingleParticle::Box(sb) => SingleParticle::Box(sb.with_volume(new_volume)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Sectors {
    /// `z`-particle spectrum at index `z`; index 0 must be the single level `(0, 1)`.
    Explicit(Vec<Arc<SpectrumModel>>),
    /// `z` distinguishable independent particles: `ln Q_z = z ln Q_1`.
    Independent { particle: SingleParticle, z_max: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrandModel {
    sectors: Sectors,
    volume: f64,
    scaling: VolumeScaling,
    operating: OperatingBox,
    tail_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrandPoint {
    pub b: f64,
    pub mu: f64,
    pub ln_q: f64,
    pub n: f64,
    pub energy: f64,
    pub entropy: f64,
    pub pressure: f64,
    pub euler: f64,
    /// Variance of the particle number, `dn/dmu = b var(z)`.
    pub amount_variance: f64,
}

impl GrandPoint {
    pub fn temperature(&self) -> f64 {
        1.0 / self.b
    }
}

fn validate_operating(op: &OperatingBox) -> Result<()> {
    let ok = op.b[0] > 0.0 && op.b[0] <= op.b[1] && op.mu[0] <= op.mu[1];
    if ok && op.b.iter().chain(&op.mu).all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("malformed operating box {op:?}")))
    }
}

/// Largest `ln x = b mu_max + ln Q_1(b)` over a log grid spanning the box.
fn max_ln_fugacity_ratio(particle: &SingleParticle, op: &OperatingBox) -> f64 {
    const GRID: usize = 65;
    let (lo, hi) = (op.b[0].ln(), op.b[1].ln());
    (0..GRID)
        .map(|i| (lo + (hi - lo) * i as f64 / (GRID - 1) as f64).exp())
        .chain([op.b[0], op.b[1]])
        .map(|b| b * op.mu[1] + particle.evaluate(b).0)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Geometric tail `x^{z+1} / (1 - x^{z+1})` of the independent-sector sum.
fn geometric_tail(ln_x: f64, z_max: usize) -> f64 {
    let t = (z_max as f64 + 1.0) * ln_x;
    t.exp() / -t.exp_m1()
}

impl GrandModel {
    /// Model from explicit per-`z` spectra.
    pub fn explicit(
        sectors: Vec<Arc<SpectrumModel>>,
        volume: f64,
        scaling: VolumeScaling,
        operating: OperatingBox,
    ) -> Result<Self> {
        validate_operating(&operating)?;
        check_volume(volume)?;
        match sectors.first() {
            Some(s0) if s0.len() == 1 && s0.ground().energy == 0.0 && s0.ground().degeneracy == 1.0 => {}
            _ => return Err(Error::InvalidInput("sector z = 0 must be the single level (0, 1)".into())),
        }
        let tail_bound = sectors.iter().map(|s| s.truncation_tail_bound()).fold(0.0, f64::max);
        Ok(GrandModel { sectors: Sectors::Explicit(sectors), volume, scaling, operating, tail_bound })
    }

    /// Independent distinguishable particles, with `z_max` chosen so the
    /// neglected grand-sum mass is below [`TAIL_LIMIT`] everywhere in the box.
    pub fn independent(
        particle: SingleParticle,
        volume: f64,
        scaling: VolumeScaling,
        operating: OperatingBox,
    ) -> Result<Self> {
        validate_operating(&operating)?;
        check_volume(volume)?;
        let ln_x = max_ln_fugacity_ratio(&particle, &operating);
        if !(ln_x < 0.0) {
            return Err(Error::InvalidInput(format!(
                "grand sum diverges in the operating box (max e^(b mu) Q1 = {})",
                ln_x.exp()
            )));
        }
        // x^{z+1} < tol (1 - x^{z+1})  <=>  (z+1) ln x < ln(tol/(1+tol))
        let target = (TAIL_LIMIT * 0.1 / (1.0 + TAIL_LIMIT * 0.1)).ln();
        let mut z_max = ((target / ln_x).ceil() as usize).saturating_sub(2).max(1);
        while geometric_tail(ln_x, z_max) >= TAIL_LIMIT * 0.1 {
            z_max += 1;
        }
        Self::independent_with_cutoff(particle, z_max, volume, scaling, operating)
    }

    /// Independent particles with an explicit `z_max`.
    pub fn independent_with_cutoff(
        particle: SingleParticle,
        z_max: usize,
        volume: f64,
        scaling: VolumeScaling,
        operating: OperatingBox,
    ) -> Result<Self> {
        validate_operating(&operating)?;
        check_volume(volume)?;
        let ln_x = max_ln_fugacity_ratio(&particle, &operating);
        let tail_bound = if ln_x < 0.0 { geometric_tail(ln_x, z_max) } else { f64::INFINITY };
        Ok(GrandModel { sectors: Sectors::Independent { particle, z_max }, volume, scaling, operating, tail_bound })
    }

    pub fn sectors(&self) -> &Sectors {
        &self.sectors
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn scaling(&self) -> VolumeScaling {
        self.scaling
    }

    pub fn operating_box(&self) -> &OperatingBox {
        &self.operating
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn z_max(&self) -> usize {
        match &self.sectors {
            Sectors::Explicit(v) => v.len() - 1,
            Sectors::Independent { z_max, .. } => *z_max,
        }
    }

    /// Same model at volume `v`, keeping `z_max` and the operating box.
    pub fn at_volume(&self, v: f64) -> Result<Self> {
        check_volume(v)?;
        let factor = match self.scaling {
            VolumeScaling::Box => (v / self.volume).powf(-2.0 / 3.0),
            VolumeScaling::None => 1.0,
        };
        let sectors = match &self.sectors {
            Sectors::Explicit(list) => Sectors::Explicit(
                list.iter()
                    .enumerate()
                    .map(|(z, s)| if z == 0 { Ok(s.clone()) } else { s.scaled(factor).map(Arc::new) })
                    .collect::<Result<_>>()?,
            ),
            Sectors::Independent { particle, z_max } => Sectors::Independent {
                particle: if self.scaling == VolumeScaling::Box {
                    particle.scaled_energies(factor, v)?
                } else {
                    particle.clone()
                },
                z_max: *z_max,
            },
        };
        Ok(GrandModel {
            sectors,
            volume: v,
            scaling: self.scaling,
            operating: self.operating,
            tail_bound: self.tail_bound,
        })
    }

    /// `(ln Q_z, E_z)` for every sector at inverse temperature `b`.
    fn sector_terms(&self, b: f64) -> Vec<(f64, f64)> {
        match &self.sectors {
            Sectors::Explicit(list) => list
                .iter()
                .map(|s| {
                    let p = s.evaluate(b);
                    (p.ln_q, p.energy)
                })
                .collect(),
            Sectors::Independent { particle, z_max } => {
                let (lq, e) = particle.evaluate(b);
                (0..=*z_max).map(|z| (z as f64 * lq, z as f64 * e)).collect()
            }
        }
    }
}

fn check_volume(v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("volume {v} must be positive")))
    }
}

/// Grand-canonical properties at `(b, mu)`.
pub fn grand_properties(model: &GrandModel, b: f64, mu: f64) -> Result<GrandPoint> {
    if !(b > 0.0) || !b.is_finite() || !mu.is_finite() || !model.operating.contains(b, mu) {
        return Err(Error::OperatingBoxExceeded { b, mu });
    }
    Ok(evaluate_unchecked(model, b, mu))
}

fn evaluate_unchecked(model: &GrandModel, b: f64, mu: f64) -> GrandPoint {
    let terms = model.sector_terms(b);
    let logs: Vec<f64> = terms.iter().enumerate().map(|(z, (lq, _))| b * mu * z as f64 + lq).collect();
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
    // the largest weight is exactly 1; summing the rest separately keeps
    // dilute sums accurate through ln_1p
    let lead = logs.iter().position(|&l| l == top).unwrap_or(0);
    let rest: f64 = weights.iter().enumerate().filter(|&(i, _)| i != lead).map(|(_, w)| w).sum();
    let z_sum = 1.0 + rest;
    let ln_q = top + rest.ln_1p();

    let (mut n, mut energy, mut n2) = (0.0, 0.0, 0.0);
    for (z, (w, (_, e))) in weights.iter().zip(&terms).enumerate() {
        let p = w / z_sum;
        n += p * z as f64;
        n2 += p * (z * z) as f64;
        energy += p * e;
    }
    let pressure = match model.scaling {
        VolumeScaling::Box => 2.0 * energy / (3.0 * model.volume),
        VolumeScaling::None => 0.0,
    };
    GrandPoint {
        b,
        mu,
        ln_q,
        n,
        energy,
        entropy: b * (energy - mu * n) + ln_q,
        pressure,
        euler: pressure * model.volume - ln_q / b,
        amount_variance: (n2 - n * n).max(0.0),
    }
}

/// Chemical potential at which the mean amount equals `n_target`.
pub fn fugacity_of_amount(model: &GrandModel, b: f64, n_target: f64) -> Result<f64> {
    let [mu_lo, mu_hi] = model.operating.mu;
    if !(b > 0.0) || !model.operating.contains(b, mu_lo) {
        return Err(Error::OperatingBoxExceeded { b, mu: mu_lo });
    }
    if !(n_target > 0.0 && n_target < model.z_max() as f64) {
        return Err(Error::AmountOutOfRange(n_target));
    }
    let n_lo = evaluate_unchecked(model, b, mu_lo).n;
    let n_hi = evaluate_unchecked(model, b, mu_hi).n;
    if !(n_target >= n_lo && n_target <= n_hi) {
        return Err(Error::AmountOutOfRange(n_target));
    }
    solve_decreasing(
        |mu| {
            let p = evaluate_unchecked(model, b, mu);
            Ok((-p.n, -b * p.amount_variance))
        },
        -n_target,
        mu_lo,
        mu_hi,
    )
}

/// Sector list `z = 0..=z_max` built from `z`-fold composites of one spectrum.
pub fn composed_sectors(single: &SpectrumModel, z_max: usize, energy_cutoff: f64) -> Result<Vec<Arc<SpectrumModel>>> {
    let vacuum = Arc::new(crate::spectra::build_finite(&[(0.0, 1.0)])?.with_label("vacuum"));
    let mut out = vec![vacuum];
    let mut current: Option<SpectrumModel> = None;
    for _ in 1..=z_max {
        let next = match &current {
            None => single.clone(),
            Some(c) => compose(c, single, energy_cutoff)?,
        };
        out.push(Arc::new(next.clone()));
        current = Some(next);
    }
    Ok(out)
}

/// On-disk grand model description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrandModelFile {
    pub volume: f64,
    pub scaling: VolumeScaling,
    pub operating_box: OperatingBox,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sectors: Option<Vec<SpectrumFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub independent: Option<IndependentFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_max: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndependentFile {
    Spectrum(SpectrumFile),
    Box {
        mass: f64,
        sides: [f64; 3],
        #[serde(default)]
        units: UnitMode,
    },
}

impl TryFrom<GrandModelFile> for GrandModel {
    type Error = Error;

    fn try_from(f: GrandModelFile) -> Result<Self> {
        match (f.sectors, f.independent) {
            (Some(list), None) => {
                let sectors =
                    list.into_iter().map(|s| SpectrumModel::try_from(s).map(Arc::new)).collect::<Result<Vec<_>>>()?;
                GrandModel::explicit(sectors, f.volume, f.scaling, f.operating_box)
            }
            (None, Some(ind)) => {
                let particle = match ind {
                    IndependentFile::Spectrum(s) => SingleParticle::Spectrum(Arc::new(s.try_into()?)),
                    IndependentFile::Box { mass, sides, units } => {
                        let g = BoxGeometry::new(mass, sides)?;
                        if (g.volume() - f.volume).abs() > 1e-12 * f.volume {
                            return Err(Error::InvalidInput("box sides do not match the model volume".into()));
                        }
                        SingleParticle::Box(SeparableBox::new(g, UnitSystem::from_mode(units)))
                    }
                };
                match f.z_max {
                    Some(z) => GrandModel::independent_with_cutoff(particle, z, f.volume, f.scaling, f.operating_box),
                    None => GrandModel::independent(particle, f.volume, f.scaling, f.operating_box),
                }
            }
            _ => Err(Error::InvalidInput("grand model needs exactly one of `sectors` or `independent`".into())),
        }
    }
}

impl GrandModel {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let f: GrandModelFile =
            serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("grand model JSON: {e}")))?;
        f.try_into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::build_finite;

    fn toy() -> GrandModel {
        let sectors =
            vec![Arc::new(build_finite(&[(0.0, 1.0)]).unwrap()), Arc::new(build_finite(&[(0.0, 1.0)]).unwrap())];
        let op = OperatingBox { b: [0.1, 10.0], mu: [-50.0, 50.0] };
        GrandModel::explicit(sectors, 1.0, VolumeScaling::None, op).unwrap()
    }

    #[test]
    fn two_occupancy_toy() {
        let g = grand_properties(&toy(), 1.0, 0.0).unwrap();
        assert!((g.ln_q - 2f64.ln()).abs() < 1e-15);
        assert!((g.n - 0.5).abs() < 1e-15);
        assert!(fugacity_of_amount(&toy(), 1.0, 0.5).unwrap().abs() < 1e-12);
        assert_eq!(fugacity_of_amount(&toy(), 1.0, 0.0).unwrap_err().name(), "AmountOutOfRange");
    }

    #[test]
    fn vacuum_limit() {
        let g = grand_properties(&toy(), 1.0, -45.0).unwrap();
        assert!(g.n < 1e-19);
        assert!(g.ln_q.abs() < 1e-19);
    }

    #[test]
    fn outside_box() {
        assert_eq!(grand_properties(&toy(), 20.0, 0.0).unwrap_err().name(), "OperatingBoxExceeded");
    }

    #[test]
    fn thermodynamic_identity() {
        let g = grand_properties(&toy(), 0.7, 0.3).unwrap();
        let t = g.temperature();
        assert!((g.entropy * t - (g.energy - g.mu * g.n + t * g.ln_q)).abs() < 1e-12);
    }

    #[test]
    fn z_zero_sector_checked() {
        let bad = vec![Arc::new(build_finite(&[(0.0, 2.0)]).unwrap())];
        let op = OperatingBox { b: [1.0, 1.0], mu: [0.0, 0.0] };
        assert!(GrandModel::explicit(bad, 1.0, VolumeScaling::None, op).is_err());
    }
}

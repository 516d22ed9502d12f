//! Energy-entropy diagram data: the stable-equilibrium boundary curve and the
//! geometric annotations of a state.

use serde::Serialize;

use crate::availability::{adiabatic_availability, available_energy_parts, ses_energy_floor, Reservoir};
use crate::equilibrium::{max_entropy_at, CanonicalSystem};
use crate::error::{Error, Result};
use crate::spectra::SpectrumModel;
use crate::states::LevelDistribution;

/// Smallest number of points accepted by [`ses_curve`].
pub const MIN_POINTS: usize = 16;

/// `b` times the level gap at which the populations above the edge level fall
/// below double precision.
const EDGE_DEPTH: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub entropy: f64,
    pub energy: f64,
    pub b: f64,
    pub temperature: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Coverage {
    PositiveOnly,
    Full,
}

/// Points of the boundary curve ordered by strictly increasing energy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EsCurve {
    pub points: Vec<CurvePoint>,
    pub coverage: Coverage,
}

impl EsCurve {
    /// Index of the largest-entropy point.
    pub fn peak(&self) -> usize {
        let mut best = 0;
        for (i, p) in self.points.iter().enumerate() {
            if p.entropy > self.points[best].entropy {
                best = i;
            }
        }
        best
    }
}

/// Log-spaced magnitudes in `[lo, hi]` with the top half of the range sampled
/// twice as densely.
fn magnitudes(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    // m base points plus midpoints in the upper half give 2m - 1 - ceil(m/2)
    let mut m: usize = 2;
    while 2 * m - 1 - m.div_ceil(2) < count {
        m += 1;
    }
    let (a, z) = (lo.ln(), hi.ln());
    let step = (z - a) / (m - 1) as f64;
    let mut out = Vec::with_capacity(count + 2);
    for i in 0..m {
        let x = a + step * i as f64;
        out.push(x.exp());
        if i + 1 < m && 2 * i >= m {
            out.push((x + 0.5 * step).exp());
        }
    }
    out
}

fn point_at<S: CanonicalSystem + ?Sized>(sys: &S, b: f64) -> CurvePoint {
    let tp = sys.evaluate(b);
    CurvePoint { entropy: tp.entropy, energy: tp.energy, b, temperature: 1.0 / b }
}

/// Sample the stable-equilibrium curve of `spectrum`.
///
/// The negative-temperature branch is only available for bounded spectra.
pub fn ses_curve(spectrum: &SpectrumModel, n_points: usize, include_negative: bool) -> Result<EsCurve> {
    if n_points < MIN_POINTS {
        return Err(Error::InvalidInput(format!("at least {MIN_POINTS} points are required")));
    }
    if include_negative && !spectrum.bounded() {
        return Err(Error::NegativeBranchUnavailable);
    }
    let levels = spectrum.levels();
    let ground = spectrum.ground();
    let mut pts =
        vec![CurvePoint { entropy: ground.degeneracy.ln(), energy: ground.energy, b: f64::INFINITY, temperature: 0.0 }];
    if levels.len() > 1 {
        let bottom_gap = levels[1].energy - levels[0].energy;
        let top_gap = levels[levels.len() - 1].energy - levels[levels.len() - 2].energy;
        let b_hi = EDGE_DEPTH / bottom_gap.min(if include_negative { top_gap } else { f64::INFINITY });
        let b_lo = match spectrum.t_max() {
            Some(t) if !spectrum.bounded() => 1.0 / t,
            _ => 1e-2 / spectrum.span(),
        };
        let per_side = if include_negative { (n_points - 3) / 2 } else { n_points - 2 };
        let mags = magnitudes(b_lo, b_hi.max(b_lo * 10.0), per_side);
        pts.extend(mags.iter().map(|&b| point_at(spectrum, b)));
        if spectrum.bounded() {
            pts.push(point_at(spectrum, 0.0));
        }
        if include_negative {
            pts.extend(mags.iter().map(|&b| point_at(spectrum, -b)));
            let top = spectrum.top();
            pts.push(CurvePoint {
                entropy: top.degeneracy.ln(),
                energy: top.energy,
                b: f64::NEG_INFINITY,
                temperature: -0.0,
            });
        }
    }
    // exact endpoints come first so ties drop the sampled neighbour
    pts.sort_by(|p, q| p.energy.total_cmp(&q.energy).then(p.b.abs().total_cmp(&q.b.abs()).reverse()));
    let mut out: Vec<CurvePoint> = Vec::with_capacity(pts.len());
    for p in pts {
        match out.last() {
            Some(last) if p.energy <= last.energy => {
                if p.b == f64::NEG_INFINITY {
                    *out.last_mut().unwrap() = p;
                }
            }
            _ => out.push(p),
        }
    }
    let coverage = if include_negative { Coverage::Full } else { Coverage::PositiveOnly };
    Ok(EsCurve { points: out, coverage })
}

/// Curve points at `n` evenly spaced values of `b` in `[b_lo, b_hi]`, ordered
/// by increasing energy.
pub fn ses_segment<S: CanonicalSystem + ?Sized>(sys: &S, b_lo: f64, b_hi: f64, n: usize) -> Result<Vec<CurvePoint>> {
    if n < 2 || !(b_lo < b_hi) {
        return Err(Error::InvalidInput("segment needs b_lo < b_hi and two points".into()));
    }
    let step = (b_hi - b_lo) / (n - 1) as f64;
    Ok((0..n).rev().map(|i| point_at(sys, b_lo + step * i as f64)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReservoirAnnotation {
    pub temperature: f64,
    pub energy: f64,
    pub entropy: f64,
    /// `E - E_R`.
    pub energy_term: f64,
    /// `T_R (S_R - S)`.
    pub entropy_term: f64,
    pub omega: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Annotation {
    pub energy: f64,
    pub entropy: f64,
    /// Positive-branch stable-equilibrium energy at the state's entropy.
    pub ses_energy_at_entropy: f64,
    /// Largest entropy compatible with the state's energy.
    pub ses_entropy_at_energy: f64,
    pub psi: f64,
    pub reservoir: Option<ReservoirAnnotation>,
}

pub fn annotate(state: &LevelDistribution, reservoir: Option<&Reservoir>) -> Result<Annotation> {
    let spectrum = state.spectrum().as_ref();
    let reservoir = match reservoir {
        Some(r) => {
            let parts = available_energy_parts(state, r)?;
            Some(ReservoirAnnotation {
                temperature: r.temperature(),
                energy: parts.reference.energy,
                entropy: parts.reference.entropy,
                energy_term: parts.energy_term,
                entropy_term: parts.entropy_term,
                omega: parts.omega,
            })
        }
        None => None,
    };
    Ok(Annotation {
        energy: state.energy(),
        entropy: state.entropy(),
        ses_energy_at_entropy: ses_energy_floor(spectrum, state.entropy())?,
        ses_entropy_at_energy: max_entropy_at(spectrum, state.energy())?,
        psi: adiabatic_availability(state)?,
        reservoir,
    })
}

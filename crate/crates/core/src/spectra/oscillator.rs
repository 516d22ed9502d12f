use super::{Level, Provenance, SpectrumModel, TAIL_LIMIT};
use crate::error::{Error, Result};

/// Neglected-to-kept mass ratio of an `n`-level oscillator at temperature `t_max`.
///
/// With `x = hnu/t_max` the kept sum is `e^{-x/2}(1 - e^{-nx})/(1 - e^{-x})` and
/// the dropped tail is `e^{-(n+1/2)x}/(1 - e^{-x})`, so the ratio is
/// `e^{-nx}/(1 - e^{-nx})`.
pub fn oscillator_tail_bound(hnu: f64, n_levels: usize, t_max: f64) -> f64 {
    let nx = n_levels as f64 * hnu / t_max;
    let y = (-nx).exp();
    y / -(-nx).exp_m1()
}

/// Smallest level count (at least 2) whose tail ratio at `t_max` is below `tol`.
pub fn oscillator_levels_for(hnu: f64, t_max: f64, tol: f64) -> usize {
    let x = hnu / t_max;
    // e^{-nx}/(1-e^{-nx}) < tol  <=>  n x > ln(1 + 1/tol)
    let guess = ((1.0 / tol).ln_1p() / x).floor().max(2.0) as usize;
    let mut n = guess.saturating_sub(2).max(2);
    while oscillator_tail_bound(hnu, n, t_max) >= tol {
        n += 1;
    }
    n
}

/// Harmonic oscillator levels `(j + 1/2) hnu`, `j = 0..n_levels`.
///
/// `t_max` defaults to ten level spacings. The tail bound at `t_max` must be
/// below [`TAIL_LIMIT`].
pub fn build_oscillator(hnu: f64, n_levels: usize, t_max: Option<f64>) -> Result<SpectrumModel> {
    if !(hnu.is_finite() && hnu > 0.0) {
        return Err(Error::InvalidInput(format!("hnu = {hnu} must be positive")));
    }
    if n_levels < 2 {
        return Err(Error::InvalidInput("an oscillator needs at least 2 levels".into()));
    }
    let t_max = t_max.unwrap_or(10.0 * hnu);
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::NonPositiveTemperature(t_max));
    }
    let tail = oscillator_tail_bound(hnu, n_levels, t_max);
    if tail >= TAIL_LIMIT {
        return Err(Error::TruncationTooCoarse { bound: tail, limit: TAIL_LIMIT, t_max });
    }
    let levels = (0..n_levels).map(|j| Level::new((j as f64 + 0.5) * hnu, 1.0)).collect();
    Ok(SpectrumModel::from_parts(
        levels,
        false,
        tail,
        Some(t_max),
        format!("oscillator(hnu={hnu})"),
        Provenance::Oscillator { hnu },
    ))
}

/// Oscillator truncated where both the dropped mass and its share of the
/// second energy moment at `t_max` are below `tol`.
pub fn build_oscillator_auto(hnu: f64, t_max: f64, tol: f64) -> Result<SpectrumModel> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::NonPositiveTemperature(t_max));
    }
    let tol = tol.min(TAIL_LIMIT * 0.5);
    let x = hnu / t_max;
    let mut n = oscillator_levels_for(hnu, t_max, tol);
    // dropped levels sit near n hnu while the kept moments scale like t_max
    while oscillator_tail_bound(hnu, n, t_max) * (1.0 + n as f64 * x).powi(2) >= tol {
        n += 1;
    }
    build_oscillator(hnu, n, Some(t_max))
}

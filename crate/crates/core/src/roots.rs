//! Safeguarded Newton iteration for monotone decreasing scalar maps.

use crate::error::{Error, Result};

const MAX_ITER: usize = 500;

/// Root of `f(x) = target` for `f` decreasing on `[lo, hi]`, with
/// `f(lo) >= target >= f(hi)`.
///
/// `f` returns the value and its derivative. Newton steps are taken when they
/// land strictly inside the current bracket and the bracket keeps shrinking;
/// otherwise the bracket is bisected (geometrically when it spans orders of
/// magnitude on one side of zero). Iteration stops at machine resolution in
/// `x`.
pub(crate) fn solve_decreasing<F>(mut f: F, target: f64, mut lo: f64, mut hi: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    if lo.is_nan() || hi.is_nan() || lo > hi {
        return Err(Error::NoBracket("invalid interval"));
    }
    let mut x = split(lo, hi);
    let mut width = hi - lo;
    let mut stalls = 0;
    for _ in 0..MAX_ITER {
        let (v, d) = f(x)?;
        if v == target {
            return Ok(x);
        }
        if v > target {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) || hi - lo <= f64::MIN_POSITIVE {
            return Ok(x);
        }
        stalls = if hi - lo > 0.5 * width { stalls + 1 } else { 0 };
        width = hi - lo;
        let newton = x - (v - target) / d;
        if d < 0.0 && d.is_finite() && newton > lo && newton < hi && stalls < 4 {
            if (newton - x).abs() <= 2.0 * f64::EPSILON * x.abs() {
                return Ok(newton);
            }
            x = newton;
        } else {
            stalls = 0;
            x = split(lo, hi);
        }
    }
    Ok(x)
}

fn split(lo: f64, hi: f64) -> f64 {
    if lo > 0.0 && hi / lo > 16.0 {
        (lo * hi).sqrt()
    } else if hi < 0.0 && lo / hi > 16.0 {
        -(lo * hi).sqrt()
    } else {
        0.5 * (lo + hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear() {
        let r = solve_decreasing(|x| Ok((3.0 - 2.0 * x, -2.0)), 1.0, -10.0, 10.0).unwrap();
        assert!((r - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exponential_over_wide_bracket() {
        let r = solve_decreasing(|x: f64| Ok(((-x).exp(), -(-x).exp())), 1e-6, 1e-8, 1e6).unwrap();
        assert!((r - 1e6f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn flat_derivative_falls_back_to_bisection() {
        let r = solve_decreasing(|x: f64| Ok((-x * x * x, 0.0)), -8.0, 0.0, 5.0).unwrap();
        assert!((r - 2.0).abs() < 1e-14);
    }
}

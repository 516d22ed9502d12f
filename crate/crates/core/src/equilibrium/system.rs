use crate::spectra::{SeparableBox, SpectrumModel};

/// Range of inverse temperatures on which a system's canonical sums are valid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaDomain {
    /// Bounded spectrum: any finite `b`, including negative values.
    Real,
    /// Unbounded but exactly summed: any `b > 0`.
    Positive,
    /// Truncated spectrum certified for `b >= b_min > 0`.
    AtLeast(f64),
}

/// One stable-equilibrium sample at inverse temperature `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalPoint {
    pub b: f64,
    pub ln_q: f64,
    pub energy: f64,
    pub entropy: f64,
    pub variance: f64,
    pub heat_capacity: f64,
}

impl ThermalPoint {
    /// `k_B T`; infinite at `b = 0`.
    pub fn temperature(&self) -> f64 {
        1.0 / self.b
    }
}

/// Anything with a canonical partition function.
///
/// `evaluate` is called only for `b` inside [`CanonicalSystem::domain`] (and,
/// for truncated spectra, possibly below `b_min`, where the sum is still finite
/// but uncertified).
pub trait CanonicalSystem {
    fn domain(&self) -> BetaDomain;
    fn ground_energy(&self) -> f64;
    fn ln_ground_degeneracy(&self) -> f64;
    /// Highest energy and its log-degeneracy, for bounded systems.
    fn ceiling(&self) -> Option<(f64, f64)>;
    /// `ln sum g`, for bounded systems.
    fn ln_total_degeneracy(&self) -> Option<f64>;
    /// Typical level spacing, used to seed brackets.
    fn energy_scale(&self) -> f64;
    fn evaluate(&self, b: f64) -> ThermalPoint;
}

impl CanonicalSystem for SpectrumModel {
    fn domain(&self) -> BetaDomain {
        if self.bounded() {
            BetaDomain::Real
        } else {
            match self.t_max() {
                Some(t) => BetaDomain::AtLeast(1.0 / t),
                None => BetaDomain::Positive,
            }
        }
    }

    fn ground_energy(&self) -> f64 {
        self.ground().energy
    }

    fn ln_ground_degeneracy(&self) -> f64 {
        self.ground().degeneracy.ln()
    }

    fn ceiling(&self) -> Option<(f64, f64)> {
        self.bounded().then(|| (self.top().energy, self.top().degeneracy.ln()))
    }

    fn ln_total_degeneracy(&self) -> Option<f64> {
        self.bounded().then(|| self.ln_total_degeneracy())
    }

    fn energy_scale(&self) -> f64 {
        let span = self.span();
        if span > 0.0 {
            span
        } else {
            1.0
        }
    }

    fn evaluate(&self, b: f64) -> ThermalPoint {
        // Shift energies so every exponent is <= 0.
        let edge = if b >= 0.0 { self.ground() } else { self.top() };
        let shift = edge.energy;
        // the edge weight is exactly its degeneracy; the rest goes through ln_1p
        let (mut rest, mut s1) = (0.0, 0.0);
        for l in self.levels() {
            let d = l.energy - shift;
            let w = l.degeneracy * (-b * d).exp();
            if d != 0.0 {
                rest += w;
            }
            s1 += w * d;
        }
        let z = edge.degeneracy + rest;
        let m = s1 / z;
        let mut var = 0.0;
        for l in self.levels() {
            let d = l.energy - shift;
            let w = l.degeneracy * (-b * d).exp();
            var += w * (d - m) * (d - m);
        }
        var /= z;
        let ln_z = edge.degeneracy.ln() + (rest / edge.degeneracy).ln_1p();
        ThermalPoint {
            b,
            ln_q: ln_z - b * shift,
            energy: shift + m,
            entropy: b * m + ln_z,
            variance: var,
            heat_capacity: b * b * var,
        }
    }
}

impl CanonicalSystem for SeparableBox {
    fn domain(&self) -> BetaDomain {
        BetaDomain::Positive
    }

    fn ground_energy(&self) -> f64 {
        SeparableBox::ground_energy(self)
    }

    fn ln_ground_degeneracy(&self) -> f64 {
        0.0
    }

    fn ceiling(&self) -> Option<(f64, f64)> {
        None
    }

    fn ln_total_degeneracy(&self) -> Option<f64> {
        None
    }

    fn energy_scale(&self) -> f64 {
        SeparableBox::ground_energy(self)
    }

    fn evaluate(&self, b: f64) -> ThermalPoint {
        let mut p = ThermalPoint { b, ln_q: 0.0, energy: 0.0, entropy: 0.0, variance: 0.0, heat_capacity: 0.0 };
        for i in 0..3 {
            let d = self.directional(i, b);
            p.ln_q += d.ln_q;
            p.energy += d.energy;
            p.entropy += d.entropy;
            p.variance += d.variance;
        }
        p.heat_capacity = b * b * p.variance;
        p
    }
}

/// `copies` independent, distinguishable replicas of one system.
#[derive(Debug, Clone, Copy)]
pub struct Replicated<'a, S: ?Sized> {
    pub inner: &'a S,
    pub copies: f64,
}

impl<'a, S: CanonicalSystem + ?Sized> Replicated<'a, S> {
    pub fn new(inner: &'a S, copies: f64) -> Self {
        Replicated { inner, copies }
    }
}

impl<S: CanonicalSystem + ?Sized> CanonicalSystem for Replicated<'_, S> {
    fn domain(&self) -> BetaDomain {
        self.inner.domain()
    }

    fn ground_energy(&self) -> f64 {
        self.copies * self.inner.ground_energy()
    }

    fn ln_ground_degeneracy(&self) -> f64 {
        self.copies * self.inner.ln_ground_degeneracy()
    }

    fn ceiling(&self) -> Option<(f64, f64)> {
        self.inner.ceiling().map(|(e, g)| (self.copies * e, self.copies * g))
    }

    fn ln_total_degeneracy(&self) -> Option<f64> {
        self.inner.ln_total_degeneracy().map(|g| self.copies * g)
    }

    fn energy_scale(&self) -> f64 {
        self.inner.energy_scale()
    }

    fn evaluate(&self, b: f64) -> ThermalPoint {
        let p = self.inner.evaluate(b);
        let n = self.copies;
        ThermalPoint {
            b,
            ln_q: n * p.ln_q,
            energy: n * p.energy,
            entropy: n * p.entropy,
            variance: n * p.variance,
            heat_capacity: n * p.heat_capacity,
        }
    }
}

/// Two independent systems held at a common temperature.
#[derive(Debug, Clone, Copy)]
pub struct Pair<'a, A: ?Sized, B: ?Sized> {
    pub a: &'a A,
    pub b: &'a B,
}

impl<A: CanonicalSystem + ?Sized, B: CanonicalSystem + ?Sized> CanonicalSystem for Pair<'_, A, B> {
    fn domain(&self) -> BetaDomain {
        use BetaDomain::*;
        match (self.a.domain(), self.b.domain()) {
            (AtLeast(x), AtLeast(y)) => AtLeast(x.max(y)),
            (AtLeast(x), _) | (_, AtLeast(x)) => AtLeast(x),
            (Real, Real) => Real,
            _ => Positive,
        }
    }

    fn ground_energy(&self) -> f64 {
        self.a.ground_energy() + self.b.ground_energy()
    }

    fn ln_ground_degeneracy(&self) -> f64 {
        self.a.ln_ground_degeneracy() + self.b.ln_ground_degeneracy()
    }

    fn ceiling(&self) -> Option<(f64, f64)> {
        let (ea, ga) = self.a.ceiling()?;
        let (eb, gb) = self.b.ceiling()?;
        Some((ea + eb, ga + gb))
    }

    fn ln_total_degeneracy(&self) -> Option<f64> {
        Some(self.a.ln_total_degeneracy()? + self.b.ln_total_degeneracy()?)
    }

    fn energy_scale(&self) -> f64 {
        self.a.energy_scale().min(self.b.energy_scale())
    }

    fn evaluate(&self, b: f64) -> ThermalPoint {
        let (x, y) = (self.a.evaluate(b), self.b.evaluate(b));
        ThermalPoint {
            b,
            ln_q: x.ln_q + y.ln_q,
            energy: x.energy + y.energy,
            entropy: x.entropy + y.entropy,
            variance: x.variance + y.variance,
            heat_capacity: x.heat_capacity + y.heat_capacity,
        }
    }
}

//! Light-cone lattice master equations.
//!
//! A particle on a 1+1 lattice moves one site per time step in its current
//! direction and may reverse direction with a small probability (or
//! amplitude). [`simple`] iterates the single master equation for the
//! directed amplitudes `P±`, [`paths`] recovers the same amplitudes by brute
//! force enumeration of lattice paths, and [`causal`] advances the coupled
//! forward/backward fields `Z±`, `Z̄±` tied together by the causality
//! constraint.

pub mod causal;
pub mod paths;
pub mod simple;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use causal::{
    causal_history, causality_residual, master_equation_residuals, step_causal, CausalFieldPair,
    MasterEquationResiduals,
};
pub use paths::{
    endpoint_histograms, path_sum_amplitude, reversal_histogram, PathQuery,
    MAX_ENUMERATION_STEPS,
};
pub use simple::{evolve_simple, step_simple, Kernel, WeightMode};

/// What happens to amplitude that streams past the last site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    #[default]
    Periodic,
    Absorbing,
}

/// Direction of travel along the lattice axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Plus,
    Minus,
}

impl Direction {
    pub fn sign(self) -> i64 {
        match self {
            Direction::Plus => 1,
            Direction::Minus => -1,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Direction::Plus => Direction::Minus,
            Direction::Minus => Direction::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Direction::Plus => '+',
            Direction::Minus => '-',
        }
    }
}

/// Lattice geometry. The spatial step is always `speed * delta_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    delta_t: f64,
    speed: f64,
    num_sites: usize,
    boundary: Boundary,
}

impl LatticeSpec {
    /// Lattice with unit propagation speed.
    pub fn new(delta_t: f64, num_sites: usize, boundary: Boundary) -> Result<Self> {
        Self::with_speed(delta_t, 1.0, num_sites, boundary)
    }

    pub fn with_speed(
        delta_t: f64,
        speed: f64,
        num_sites: usize,
        boundary: Boundary,
    ) -> Result<Self> {
        if !(delta_t.is_finite() && delta_t > 0.0) {
            return Err(Error::InvalidLattice(format!(
                "delta_t must be positive and finite, got {delta_t}"
            )));
        }
        if !(speed.is_finite() && speed > 0.0) {
            return Err(Error::InvalidLattice(format!(
                "speed must be positive and finite, got {speed}"
            )));
        }
        if num_sites < 2 {
            return Err(Error::InvalidLattice(format!(
                "need at least 2 sites, got {num_sites}"
            )));
        }
        Ok(Self {
            delta_t,
            speed,
            num_sites,
            boundary,
        })
    }

    pub fn delta_t(&self) -> f64 {
        self.delta_t
    }

    pub fn delta_z(&self) -> f64 {
        self.speed * self.delta_t
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Site reached from `site` after moving `offset` cells, or `None` when it
    /// leaves an absorbing lattice.
    pub fn neighbor(&self, site: usize, offset: i64) -> Option<usize> {
        let n = self.num_sites as i64;
        let target = site as i64 + offset;
        match self.boundary {
            Boundary::Periodic => Some(target.rem_euclid(n) as usize),
            Boundary::Absorbing => (0..n).contains(&target).then_some(target as usize),
        }
    }
}

/// Direction-reversal rates `ζ₊`, `ζ₋` (inverse time units).
///
/// The mass is `m = |ζ₊ − ζ₋|` in units where `ħ = c = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionRates {
    zeta_plus: f64,
    zeta_minus: f64,
}

impl TransitionRates {
    pub fn new(zeta_plus: f64, zeta_minus: f64) -> Result<Self> {
        for (name, value) in [("zeta_plus", zeta_plus), ("zeta_minus", zeta_minus)] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::InvalidRates(format!(
                    "{name} must be finite and non-negative, got {value}"
                )));
            }
        }
        Ok(Self {
            zeta_plus,
            zeta_minus,
        })
    }

    /// Equal rates `ζ₊ = ζ₋ = a`, the setting of the simple master equation.
    pub fn symmetric(a: f64) -> Result<Self> {
        Self::new(a, a)
    }

    pub fn zeta_plus(&self) -> f64 {
        self.zeta_plus
    }

    pub fn zeta_minus(&self) -> f64 {
        self.zeta_minus
    }

    /// Rate toward `dir`.
    pub fn toward(&self, dir: Direction) -> f64 {
        match dir {
            Direction::Plus => self.zeta_plus,
            Direction::Minus => self.zeta_minus,
        }
    }

    /// `ζ₊ + ζ₋`, the exponent of the integrating factor.
    pub fn total(&self) -> f64 {
        self.zeta_plus + self.zeta_minus
    }

    pub fn omega(&self) -> f64 {
        (self.zeta_plus - self.zeta_minus).abs()
    }

    pub fn mass(&self) -> f64 {
        self.omega()
    }

    /// Checks that `(ζ₊ + ζ₋)·Δt < 1` so the lattice weights stay
    /// interpretable as probabilities.
    pub fn check_against(&self, spec: &LatticeSpec) -> Result<()> {
        let weight = self.total() * spec.delta_t();
        if weight >= 1.0 {
            return Err(Error::InvalidRates(format!(
                "(zeta_plus + zeta_minus) * delta_t = {weight} must be below 1"
            )));
        }
        Ok(())
    }
}

/// Whether a field holds real or complex amplitudes. Real fields store
/// complex numbers with identically zero imaginary parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarKind {
    Real,
    Complex,
}

/// Amplitudes indexed by `(site, direction)` on one time slice.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedAmplitudeField {
    kind: ScalarKind,
    plus: Vec<Complex64>,
    minus: Vec<Complex64>,
}

impl DirectedAmplitudeField {
    pub fn zeros(kind: ScalarKind, num_sites: usize) -> Self {
        Self {
            kind,
            plus: vec![Complex64::new(0.0, 0.0); num_sites],
            minus: vec![Complex64::new(0.0, 0.0); num_sites],
        }
    }

    /// A single unit of amplitude at `(site, dir)`.
    pub fn point_source(kind: ScalarKind, num_sites: usize, site: usize, dir: Direction) -> Self {
        let mut field = Self::zeros(kind, num_sites);
        field.set(site, dir, Complex64::new(1.0, 0.0));
        field
    }

    pub fn from_real(plus: Vec<f64>, minus: Vec<f64>) -> Result<Self> {
        Self::from_complex(
            ScalarKind::Real,
            plus.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
            minus.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn from_complex(
        kind: ScalarKind,
        plus: Vec<Complex64>,
        minus: Vec<Complex64>,
    ) -> Result<Self> {
        if plus.len() != minus.len() {
            return Err(Error::SizeMismatch {
                expected: plus.len(),
                found: minus.len(),
            });
        }
        let field = Self { kind, plus, minus };
        if kind == ScalarKind::Real && field.iter().any(|(_, _, v)| v.im != 0.0) {
            return Err(Error::InvalidLattice(
                "real field given a value with nonzero imaginary part".into(),
            ));
        }
        Ok(field)
    }

    pub fn kind(&self) -> ScalarKind {
        self.kind
    }

    pub fn num_sites(&self) -> usize {
        self.plus.len()
    }

    pub fn get(&self, site: usize, dir: Direction) -> Complex64 {
        match dir {
            Direction::Plus => self.plus[site],
            Direction::Minus => self.minus[site],
        }
    }

    /// Panics if a real field is handed a value with an imaginary part.
    pub fn set(&mut self, site: usize, dir: Direction, value: Complex64) {
        assert!(
            self.kind == ScalarKind::Complex || value.im == 0.0,
            "real field cannot hold {value}"
        );
        match dir {
            Direction::Plus => self.plus[site] = value,
            Direction::Minus => self.minus[site] = value,
        }
    }

    pub fn component(&self, dir: Direction) -> &[Complex64] {
        match dir {
            Direction::Plus => &self.plus,
            Direction::Minus => &self.minus,
        }
    }

    /// Same values, complex kind.
    pub fn into_complex(mut self) -> Self {
        self.kind = ScalarKind::Complex;
        self
    }

    /// `(site, direction, value)` in site-major order, `+` before `−`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, Direction, Complex64)> + '_ {
        (0..self.num_sites()).flat_map(move |site| {
            [Direction::Plus, Direction::Minus]
                .into_iter()
                .map(move |dir| (site, dir, self.get(site, dir)))
        })
    }

    /// Sum over all sites and both directions, accumulated in [`iter`](Self::iter) order.
    pub fn total_sum(&self) -> Complex64 {
        self.iter().map(|(_, _, v)| v).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.iter().all(|(_, _, v)| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.iter().map(|(_, _, v)| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.num_sites(), other.num_sites());
        self.iter()
            .zip(other.iter())
            .map(|((_, _, a), (_, _, b))| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn from_parts(kind: ScalarKind, plus: Vec<Complex64>, minus: Vec<Complex64>) -> Self {
        debug_assert_eq!(plus.len(), minus.len());
        Self { kind, plus, minus }
    }

    pub(crate) fn check_sites(&self, spec: &LatticeSpec) -> Result<()> {
        if self.num_sites() != spec.num_sites() {
            return Err(Error::SizeMismatch {
                expected: spec.num_sites(),
                found: self.num_sites(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_z_follows_speed() {
        let spec = LatticeSpec::with_speed(0.1, 2.0, 8, Boundary::Periodic).unwrap();
        assert_eq!(spec.delta_z(), 0.2);
        assert_eq!(LatticeSpec::new(0.25, 8, Boundary::Periodic).unwrap().delta_z(), 0.25);
    }

    #[test]
    fn rejects_bad_lattices() {
        assert!(LatticeSpec::new(0.0, 8, Boundary::Periodic).is_err());
        assert!(LatticeSpec::new(-1.0, 8, Boundary::Periodic).is_err());
        assert!(LatticeSpec::new(f64::NAN, 8, Boundary::Periodic).is_err());
        assert!(LatticeSpec::new(0.1, 1, Boundary::Periodic).is_err());
    }

    #[test]
    fn neighbor_wraps_or_absorbs() {
        let periodic = LatticeSpec::new(0.1, 4, Boundary::Periodic).unwrap();
        assert_eq!(periodic.neighbor(0, -1), Some(3));
        assert_eq!(periodic.neighbor(3, 1), Some(0));
        let absorbing = LatticeSpec::new(0.1, 4, Boundary::Absorbing).unwrap();
        assert_eq!(absorbing.neighbor(0, -1), None);
        assert_eq!(absorbing.neighbor(3, 1), None);
        assert_eq!(absorbing.neighbor(1, 1), Some(2));
    }

    #[test]
    fn rates_validation() {
        assert!(TransitionRates::new(-0.1, 0.0).is_err());
        assert!(TransitionRates::new(0.1, f64::INFINITY).is_err());
        let rates = TransitionRates::new(0.3, 0.1).unwrap();
        assert!((rates.mass() - 0.2).abs() < 1e-15);
        assert!((rates.total() - 0.4).abs() < 1e-15);
        let spec = LatticeSpec::new(2.5, 8, Boundary::Periodic).unwrap();
        assert!(rates.check_against(&spec).is_err());
        let spec = LatticeSpec::new(0.1, 8, Boundary::Periodic).unwrap();
        assert!(rates.check_against(&spec).is_ok());
    }

    #[test]
    fn real_field_rejects_imaginary_values() {
        let plus = vec![Complex64::new(0.0, 1.0)];
        let minus = vec![Complex64::new(0.0, 0.0)];
        assert!(DirectedAmplitudeField::from_complex(ScalarKind::Real, plus, minus).is_err());
    }
}

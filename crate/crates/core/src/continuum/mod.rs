//! Continuum limit of the causal lattice.
//!
//! The differences `Z± − Z̄∓` obey, to first order in `Δt`,
//!
//! ```text
//! ±v ∂z[Z± − Z̄∓] + ∂t[Z± − Z̄∓] + (ζ₊+ζ₋)[Z± − Z̄∓] = (ζ± − ζ∓)[Z∓ − Z̄±]
//! ```
//!
//! and the weighted chiral fields `A± = e^{(ζ₊+ζ₋)t}(Z± − Z̄∓)` obey the
//! transport equation
//!
//! ```text
//! ±v ∂z A± + ∂t A± = (ζ± − ζ∓) A∓
//! ```
//!
//! The residual functions here evaluate both with second-order central
//! differences in `z` and `t` on the middle slices of a history, so the
//! discretisation error of the check itself is `O(Δt²)`.

pub mod packets;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{Boundary, CausalFieldPair, Direction, LatticeSpec, TransitionRates};

/// Cells excluded at each edge of an absorbing lattice.
pub const ABSORBING_MARGIN: usize = 2;

/// `A±` on one time slice.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiralField {
    pub plus: Vec<Complex64>,
    pub minus: Vec<Complex64>,
    pub time: f64,
    /// `ζ₊ + ζ₋` used for the integrating factor.
    pub total_rate: f64,
}

impl ChiralField {
    /// Builds a field from given components, e.g. sampled analytic data.
    pub fn from_components(
        plus: Vec<Complex64>,
        minus: Vec<Complex64>,
        time: f64,
        total_rate: f64,
    ) -> Result<Self> {
        if plus.len() != minus.len() {
            return Err(Error::SizeMismatch {
                expected: plus.len(),
                found: minus.len(),
            });
        }
        Ok(Self {
            plus,
            minus,
            time,
            total_rate,
        })
    }

    pub fn num_sites(&self) -> usize {
        self.plus.len()
    }

    pub fn component(&self, dir: Direction) -> &[Complex64] {
        match dir {
            Direction::Plus => &self.plus,
            Direction::Minus => &self.minus,
        }
    }

    /// `(Z₊ − Z̄₋, Z₋ − Z̄₊)` recovered by removing the integrating factor.
    pub fn unweighted(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        let factor = (-self.total_rate * self.time).exp();
        (
            self.plus.iter().map(|v| v * factor).collect(),
            self.minus.iter().map(|v| v * factor).collect(),
        )
    }
}

/// `A±(z) = e^{(ζ₊+ζ₋)t}·(Z±(z) − Z̄∓(z))`, note the opposite label on `Z̄`.
pub fn chiral_field(pair: &CausalFieldPair, rates: &TransitionRates, time: f64) -> ChiralField {
    let factor = (rates.total() * time).exp();
    let difference = |dir: Direction| -> Vec<Complex64> {
        pair.forward
            .component(dir)
            .iter()
            .zip(pair.backward.component(dir.reversed()))
            .map(|(z, zbar)| (z - zbar) * factor)
            .collect()
    };
    ChiralField {
        plus: difference(Direction::Plus),
        minus: difference(Direction::Minus),
        time,
        total_rate: rates.total(),
    }
}

/// Sites at which a centered stencil is evaluated.
fn interior_sites(spec: &LatticeSpec) -> std::ops::Range<usize> {
    match spec.boundary() {
        Boundary::Periodic => 0..spec.num_sites(),
        Boundary::Absorbing => {
            ABSORBING_MARGIN..spec.num_sites().saturating_sub(ABSORBING_MARGIN)
        }
    }
}

/// Generic driver: `slices[k][dir][site]`, residual evaluated at every middle
/// slice by `term(dir, value, d/dz, d/dt, opposite value)`.
fn central_residual<F>(slices: &[[Vec<Complex64>; 2]], spec: &LatticeSpec, term: F) -> Result<f64>
where
    F: Fn(Direction, Complex64, Complex64, Complex64, Complex64) -> Complex64,
{
    if slices.len() < 3 {
        return Err(Error::TooFewSlices {
            needed: 3,
            found: slices.len(),
        });
    }
    let n = spec.num_sites();
    for slice in slices {
        for component in slice {
            if component.len() != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    found: component.len(),
                });
            }
        }
    }
    let two_dz = 2.0 * spec.delta_z();
    let two_dt = 2.0 * spec.delta_t();
    let mut worst: f64 = 0.0;
    for w in slices.windows(3) {
        for (index, dir) in [Direction::Plus, Direction::Minus].into_iter().enumerate() {
            let (before, now, after) = (&w[0][index], &w[1][index], &w[2][index]);
            let opposite = &w[1][1 - index];
            for site in interior_sites(spec) {
                let (Some(left), Some(right)) = (spec.neighbor(site, -1), spec.neighbor(site, 1))
                else {
                    continue;
                };
                let d_z = (now[right] - now[left]) / two_dz;
                let d_t = (after[site] - before[site]) / two_dt;
                worst = worst.max(term(dir, now[site], d_z, d_t, opposite[site]).norm());
            }
        }
    }
    Ok(worst)
}

fn check_consecutive(history: &[CausalFieldPair]) -> Result<()> {
    for w in history.windows(2) {
        if w[1].time_index != w[0].time_index + 1 {
            return Err(Error::NonAdjacentTimes {
                first: w[0].time_index,
                second: w[1].time_index,
            });
        }
    }
    Ok(())
}

/// Max-norm residual of the difference equation for `Z± − Z̄∓` over the
/// interior of every middle slice of `history`.
pub fn zzb_pde_residual(
    history: &[CausalFieldPair],
    spec: &LatticeSpec,
    rates: &TransitionRates,
) -> Result<f64> {
    check_consecutive(history)?;
    let slices: Vec<[Vec<Complex64>; 2]> = history
        .iter()
        .map(|pair| {
            let diff = |dir: Direction| -> Vec<Complex64> {
                pair.forward
                    .component(dir)
                    .iter()
                    .zip(pair.backward.component(dir.reversed()))
                    .map(|(z, zbar)| z - zbar)
                    .collect()
            };
            [diff(Direction::Plus), diff(Direction::Minus)]
        })
        .collect();
    let v = spec.speed();
    let total = rates.total();
    central_residual(&slices, spec, |dir, value, d_z, d_t, opposite| {
        let skew = rates.toward(dir) - rates.toward(dir.reversed());
        d_z * (v * dir.sign() as f64) + d_t + value * total - opposite * skew
    })
}

fn chiral_slices(history: &[ChiralField]) -> Vec<[Vec<Complex64>; 2]> {
    history
        .iter()
        .map(|f| [f.plus.clone(), f.minus.clone()])
        .collect()
}

/// Max-norm residual of `±v ∂z A± + ∂t A± − (ζ± − ζ∓) A∓` over the interior
/// of every middle slice. Slices are taken to be `spec.delta_t()` apart.
pub fn transport_residual(
    history: &[ChiralField],
    spec: &LatticeSpec,
    rates: &TransitionRates,
) -> Result<f64> {
    let v = spec.speed();
    central_residual(&chiral_slices(history), spec, |dir, _, d_z, d_t, opposite| {
        let skew = rates.toward(dir) - rates.toward(dir.reversed());
        d_z * (v * dir.sign() as f64) + d_t - opposite * skew
    })
}

/// Residual of pure advection `±v ∂z A± + ∂t A±` on the same stencil.
pub fn advection_residual(history: &[ChiralField], spec: &LatticeSpec) -> Result<f64> {
    let v = spec.speed();
    central_residual(&chiral_slices(history), spec, |dir, _, d_z, d_t, _| {
        d_z * (v * dir.sign() as f64) + d_t
    })
}

/// Fitted convergence order of a residual ladder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConvergenceOrder {
    /// Least-squares slope of `ln residual` against `ln Δt`.
    Fitted(f64),
    /// Every residual was zero (or below the supplied rounding floor).
    Exact,
}

impl ConvergenceOrder {
    /// Whether the order is at least `min` (an exact ladder always is).
    pub fn at_least(&self, min: f64) -> bool {
        match *self {
            ConvergenceOrder::Fitted(order) => order >= min,
            ConvergenceOrder::Exact => true,
        }
    }
}

/// Residual norms over a ladder of strictly decreasing time steps.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub residual_norms: Vec<(f64, f64)>,
    pub estimated_order: ConvergenceOrder,
}

impl ResidualReport {
    pub fn new(residual_norms: Vec<(f64, f64)>) -> Result<Self> {
        let estimated_order = convergence_order(&residual_norms)?;
        Ok(Self {
            residual_norms,
            estimated_order,
        })
    }
}

/// Least-squares slope of `ln(residual)` against `ln(Δt)`.
///
/// Needs at least three entries with positive, strictly decreasing `Δt`.
/// A ladder of exactly zero residuals is reported as
/// [`ConvergenceOrder::Exact`]; any other non-positive residual is an error.
pub fn convergence_order(entries: &[(f64, f64)]) -> Result<ConvergenceOrder> {
    if entries.len() < 3 {
        return Err(Error::InvalidLadder(format!(
            "need at least 3 entries, got {}",
            entries.len()
        )));
    }
    if entries.iter().any(|&(dt, r)| !(dt.is_finite() && dt > 0.0) || !r.is_finite()) {
        return Err(Error::InvalidLadder("entries must be finite with dt > 0".into()));
    }
    if entries.windows(2).any(|w| w[1].0 >= w[0].0) {
        return Err(Error::InvalidLadder("dt must strictly decrease".into()));
    }
    if entries.iter().all(|&(_, r)| r == 0.0) {
        return Ok(ConvergenceOrder::Exact);
    }
    if entries.iter().any(|&(_, r)| r <= 0.0) {
        return Err(Error::InvalidLadder(
            "residuals must all be positive or all exactly zero".into(),
        ));
    }
    let n = entries.len() as f64;
    let xs: Vec<f64> = entries.iter().map(|&(dt, _)| dt.ln()).collect();
    let ys: Vec<f64> = entries.iter().map(|&(_, r)| r.ln()).collect();
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxy += (x - mean_x) * (y - mean_y);
        sxx += (x - mean_x) * (x - mean_x);
    }
    Ok(ConvergenceOrder::Fitted(sxy / sxx))
}

/// [`convergence_order`] for data whose exact residual may vanish: when every
/// residual is at or below `floor` (a rounding-noise level chosen by the
/// caller) the ladder is reported as [`ConvergenceOrder::Exact`].
pub fn convergence_order_with_floor(entries: &[(f64, f64)], floor: f64) -> Result<ConvergenceOrder> {
    if !(floor.is_finite() && floor >= 0.0) {
        return Err(Error::InvalidLadder(format!("floor {floor} must be finite and >= 0")));
    }
    let order = convergence_order(entries)?;
    if entries.iter().all(|&(_, r)| r <= floor) {
        return Ok(ConvergenceOrder::Exact);
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{DirectedAmplitudeField, ScalarKind};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn equal_fields_have_zero_chiral_part() {
        let rates = TransitionRates::new(0.3, 0.1).unwrap();
        let forward = DirectedAmplitudeField::from_real(vec![1.0, 2.0], vec![3.0, 4.0]).unwrap();
        let backward = DirectedAmplitudeField::from_real(vec![3.0, 4.0], vec![1.0, 2.0]).unwrap();
        let pair = CausalFieldPair::new(forward, backward, 0).unwrap();
        let a = chiral_field(&pair, &rates, 1.7);
        assert!(a.plus.iter().chain(&a.minus).all(|v| v.norm() == 0.0));
    }

    #[test]
    fn integrating_factor() {
        let forward = DirectedAmplitudeField::from_real(vec![1.0, 2.0], vec![0.5, -1.0]).unwrap();
        let backward = DirectedAmplitudeField::from_real(vec![0.25, 0.0], vec![0.0, 1.0]).unwrap();
        let pair = CausalFieldPair::new(forward, backward, 0).unwrap();

        let rates = TransitionRates::new(0.7, 0.2).unwrap();
        let a0 = chiral_field(&pair, &rates, 0.0);
        assert_eq!(a0.plus, vec![c(1.0), c(1.0)]);
        assert_eq!(a0.minus, vec![c(0.25), c(-1.0)]);

        let rates = TransitionRates::new(1.5, 0.5).unwrap();
        let a = chiral_field(&pair, &rates, 0.5);
        let e = std::f64::consts::E;
        assert!((a.plus[0] - c(e)).norm() < 1e-15);
        assert!((a.minus[1] - c(-e)).norm() < 1e-15);
        let (plus, minus) = a.unweighted();
        assert!((plus[1] - c(1.0)).norm() < 1e-15);
        assert!((minus[0] - c(0.25)).norm() < 1e-15);
    }

    #[test]
    fn zero_history_has_zero_residual() {
        let spec = LatticeSpec::new(0.1, 8, Boundary::Periodic).unwrap();
        let rates = TransitionRates::new(0.3, 0.1).unwrap();
        let zeros = DirectedAmplitudeField::zeros(ScalarKind::Real, 8);
        let history: Vec<_> = (0..3)
            .map(|t| CausalFieldPair::new(zeros.clone(), zeros.clone(), t).unwrap())
            .collect();
        assert_eq!(zzb_pde_residual(&history, &spec, &rates).unwrap(), 0.0);
        let chiral: Vec<_> = history.iter().map(|p| chiral_field(p, &rates, 0.0)).collect();
        assert_eq!(transport_residual(&chiral, &spec, &rates).unwrap(), 0.0);
    }

    #[test]
    fn too_few_slices() {
        let spec = LatticeSpec::new(0.1, 8, Boundary::Periodic).unwrap();
        let rates = TransitionRates::new(0.3, 0.1).unwrap();
        let zeros = DirectedAmplitudeField::zeros(ScalarKind::Real, 8);
        let history: Vec<_> = (0..2)
            .map(|t| CausalFieldPair::new(zeros.clone(), zeros.clone(), t).unwrap())
            .collect();
        assert_eq!(
            zzb_pde_residual(&history, &spec, &rates),
            Err(Error::TooFewSlices { needed: 3, found: 2 })
        );
    }

    // Z± constant in z, Z̄ = 0: the equation reduces to the ODE
    // dZ±/dt + (ζ₊+ζ₋)Z± − (ζ±−ζ∓)Z∓ = 0, evaluated by hand at the middle slice.
    #[test]
    fn constant_in_space_reduces_to_ode_defect() {
        let spec = LatticeSpec::new(0.1, 6, Boundary::Periodic).unwrap();
        let rates = TransitionRates::new(0.3, 0.1).unwrap();
        let values = [(1.0, 2.0), (1.5, 1.0), (3.0, -1.0)];
        let zeros = DirectedAmplitudeField::zeros(ScalarKind::Real, 6);
        let history: Vec<_> = values
            .iter()
            .enumerate()
            .map(|(t, &(p, m))| {
                let forward = DirectedAmplitudeField::from_real(vec![p; 6], vec![m; 6]).unwrap();
                CausalFieldPair::new(forward, zeros.clone(), t as i64).unwrap()
            })
            .collect();
        // plus:  (3.0 − 1.0)/0.2 + 0.4·1.5 − 0.2·1.0    = 10.4
        // minus: (−1.0 − 2.0)/0.2 + 0.4·1.0 + 0.2·1.5   = −14.3
        let got = zzb_pde_residual(&history, &spec, &rates).unwrap();
        assert!((got - 14.3).abs() < 1e-12, "{got}");
    }

    #[test]
    fn order_of_exact_quadratic_ladder() {
        let order = convergence_order(&[(0.1, 1e-2), (0.05, 2.5e-3), (0.025, 6.25e-4)]).unwrap();
        match order {
            ConvergenceOrder::Fitted(p) => assert!((p - 2.0).abs() < 1e-12),
            ConvergenceOrder::Exact => panic!(),
        }
    }

    #[test]
    fn order_of_constant_ladder() {
        let order = convergence_order(&[(0.1, 3.0), (0.05, 3.0), (0.025, 3.0)]).unwrap();
        assert_eq!(order, ConvergenceOrder::Fitted(0.0));
    }

    #[test]
    fn exact_ladder_is_flagged() {
        let order = convergence_order(&[(0.1, 0.0), (0.05, 0.0), (0.025, 0.0)]).unwrap();
        assert_eq!(order, ConvergenceOrder::Exact);
        assert!(order.at_least(1.8));
    }

    #[test]
    fn bad_ladders() {
        assert!(convergence_order(&[(0.1, 1.0), (0.05, 0.5)]).is_err());
        assert!(convergence_order(&[(0.1, 1.0), (0.1, 0.5), (0.05, 0.2)]).is_err());
        assert!(convergence_order(&[(0.1, 1.0), (0.05, 0.0), (0.025, 0.2)]).is_err());
        assert!(convergence_order(&[(0.1, 1.0), (0.05, -1.0), (0.025, 0.2)]).is_err());
        assert!(ResidualReport::new(vec![(0.1, 1.0)]).is_err());
    }

    #[test]
    fn floor_flags_rounding_level_ladders() {
        let noisy = [(0.1, 2e-15), (0.05, 7e-15), (0.025, 3e-14)];
        assert_eq!(convergence_order_with_floor(&noisy, 1e-12).unwrap(), ConvergenceOrder::Exact);
        let ConvergenceOrder::Fitted(order) = convergence_order_with_floor(&noisy, 0.0).unwrap() else {
            panic!()
        };
        assert!(order < 0.0);
        let quadratic = [(0.1, 1e-2), (0.05, 2.5e-3), (0.025, 6.25e-4)];
        assert_eq!(
            convergence_order_with_floor(&quadratic, 1e-12).unwrap(),
            convergence_order(&quadratic).unwrap()
        );
        assert!(convergence_order_with_floor(&quadratic, f64::NAN).is_err());
    }

}

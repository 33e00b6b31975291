//! Coupled forward/backward master equations under the causality constraint.
//!
//! With `c₀ = 1 − (ζ₊ + ζ₋)Δt` and one lattice cell per step the three
//! relations are
//!
//! ```text
//! forward    Z±(z,t)      = c₀ Z±(z∓1,t−1) + ζ∓Δt Z̄±(z∓1,t+1) + ζ±Δt Z∓(z±1,t−1)
//! backward   Z̄∓(z±1,t+1) = c₀ Z̄∓(z,t)     + ζ∓Δt Z∓(z,t)       + ζ±Δt Z̄±(z,t)
//! causality  Z±(z,t)      = Z̄∓(z±1,t+1)
//! ```
//!
//! Eliminating the backward field at `t+1` through the causality identity
//! turns both the forward and the backward relation into the same-time system
//!
//! ```text
//! Z±(z,t+1) − ζ∓Δt Z∓(z,t+1) = c₀ Z±(z∓1,t) + ζ±Δt Z∓(z±1,t)
//! ```
//!
//! which is a 2×2 solve per site with determinant `1 − ζ₊ζ₋Δt²`. The
//! backward field is then read off the causality identity.

use num_complex::Complex64;

use super::{DirectedAmplitudeField, Direction, LatticeSpec, ScalarKind, TransitionRates};
use crate::error::{Error, Result};

/// Determinants below this magnitude are treated as singular.
const SINGULAR_DET: f64 = 1e-14;

/// Forward field `Z±` and backward field `Z̄±` on the same time slice.
#[derive(Debug, Clone, PartialEq)]
pub struct CausalFieldPair {
    pub forward: DirectedAmplitudeField,
    pub backward: DirectedAmplitudeField,
    pub time_index: i64,
}

impl CausalFieldPair {
    pub fn new(
        forward: DirectedAmplitudeField,
        backward: DirectedAmplitudeField,
        time_index: i64,
    ) -> Result<Self> {
        if forward.num_sites() != backward.num_sites() {
            return Err(Error::SizeMismatch {
                expected: forward.num_sites(),
                found: backward.num_sites(),
            });
        }
        let (forward, backward) = if forward.kind() == backward.kind() {
            (forward, backward)
        } else {
            (forward.into_complex(), backward.into_complex())
        };
        Ok(Self {
            forward,
            backward,
            time_index,
        })
    }

    /// Initial slice whose backward field satisfies the backward relation
    /// together with causality, given the forward field. Solves per site
    ///
    /// ```text
    /// ζ₊Δt Z̄₊ + c₀ Z̄₋ = Z₊ − ζ₋Δt Z₋
    /// c₀ Z̄₊ + ζ₋Δt Z̄₋ = Z₋ − ζ₊Δt Z₊
    /// ```
    pub fn from_forward(
        forward: DirectedAmplitudeField,
        rates: &TransitionRates,
        spec: &LatticeSpec,
    ) -> Result<Self> {
        forward.check_sites(spec)?;
        rates.check_against(spec)?;
        let dt = spec.delta_t();
        let (up, down) = (rates.zeta_plus() * dt, rates.zeta_minus() * dt);
        let c0 = 1.0 - rates.total() * dt;
        let det = up * down - c0 * c0;
        if det.abs() < SINGULAR_DET {
            return Err(Error::SingularSite { det });
        }
        let (mut plus, mut minus) = (Vec::new(), Vec::new());
        for site in 0..forward.num_sites() {
            let zp = forward.get(site, Direction::Plus);
            let zm = forward.get(site, Direction::Minus);
            let r1 = zp - zm * down;
            let r2 = zm - zp * up;
            plus.push((r1 * down - r2 * c0) / det);
            minus.push((r2 * up - r1 * c0) / det);
        }
        let backward = DirectedAmplitudeField::from_parts(forward.kind(), plus, minus);
        Ok(Self {
            forward,
            backward,
            time_index: 0,
        })
    }

    pub fn num_sites(&self) -> usize {
        self.forward.num_sites()
    }

    pub fn kind(&self) -> ScalarKind {
        self.forward.kind()
    }

    fn check_sites(&self, spec: &LatticeSpec) -> Result<()> {
        self.forward.check_sites(spec)?;
        self.backward.check_sites(spec)
    }
}

/// Solves `[[1, −b], [−a, 1]]·(x₊, x₋) = (r₊, r₋)` where `a = ζ₊Δt`, `b = ζ₋Δt`.
pub(crate) fn solve_site(
    a: f64,
    b: f64,
    rhs: (Complex64, Complex64),
) -> Result<(Complex64, Complex64)> {
    let det = 1.0 - a * b;
    if det.abs() < SINGULAR_DET {
        return Err(Error::SingularSite { det });
    }
    let (rp, rm) = rhs;
    Ok(((rp + rm * b) / det, (rm + rp * a) / det))
}

/// Advances the pair by one time step.
pub fn step_causal(
    pair: &CausalFieldPair,
    rates: &TransitionRates,
    spec: &LatticeSpec,
) -> Result<CausalFieldPair> {
    pair.check_sites(spec)?;
    rates.check_against(spec)?;
    let dt = spec.delta_t();
    let (up, down) = (rates.zeta_plus() * dt, rates.zeta_minus() * dt);
    let c0 = 1.0 - rates.total() * dt;
    let zero = Complex64::new(0.0, 0.0);
    let z = &pair.forward;
    let at = |dir: Direction, site: usize, offset: i64| {
        spec.neighbor(site, offset).map_or(zero, |s| z.get(s, dir))
    };

    let n = spec.num_sites();
    let (mut fwd_plus, mut fwd_minus) = (Vec::with_capacity(n), Vec::with_capacity(n));
    let (mut bwd_plus, mut bwd_minus) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for site in 0..n {
        let from_left = at(Direction::Plus, site, -1);
        let from_right = at(Direction::Minus, site, 1);
        let rhs_plus = from_left * c0 + from_right * up;
        let rhs_minus = from_right * c0 + from_left * down;
        let (zp, zm) = solve_site(up, down, (rhs_plus, rhs_minus))?;
        fwd_plus.push(zp);
        fwd_minus.push(zm);
        // Z̄₋(z,t+1) = Z₊(z−1,t) and Z̄₊(z,t+1) = Z₋(z+1,t)
        bwd_minus.push(from_left);
        bwd_plus.push(from_right);
    }
    let kind = pair.kind();
    Ok(CausalFieldPair {
        forward: DirectedAmplitudeField::from_parts(kind, fwd_plus, fwd_minus),
        backward: DirectedAmplitudeField::from_parts(kind, bwd_plus, bwd_minus),
        time_index: pair.time_index + 1,
    })
}

/// The initial pair followed by `steps` successive steps.
pub fn causal_history(
    initial: CausalFieldPair,
    rates: &TransitionRates,
    spec: &LatticeSpec,
    steps: usize,
) -> Result<Vec<CausalFieldPair>> {
    let mut history = Vec::with_capacity(steps + 1);
    history.push(initial);
    for _ in 0..steps {
        let next = step_causal(history.last().expect("non-empty"), rates, spec)?;
        history.push(next);
    }
    Ok(history)
}

fn check_adjacent(first: &CausalFieldPair, second: &CausalFieldPair) -> Result<()> {
    if second.time_index != first.time_index + 1 {
        return Err(Error::NonAdjacentTimes {
            first: first.time_index,
            second: second.time_index,
        });
    }
    Ok(())
}

/// `max |Z±(z,t) − Z̄∓(z±1,t+1)|` over sites whose target lies on the lattice.
pub fn causality_residual(
    pair_t: &CausalFieldPair,
    pair_next: &CausalFieldPair,
    spec: &LatticeSpec,
) -> Result<f64> {
    pair_t.check_sites(spec)?;
    pair_next.check_sites(spec)?;
    check_adjacent(pair_t, pair_next)?;
    let mut worst: f64 = 0.0;
    for site in 0..spec.num_sites() {
        for dir in [Direction::Plus, Direction::Minus] {
            if let Some(target) = spec.neighbor(site, dir.sign()) {
                let gap = pair_t.forward.get(site, dir) - pair_next.backward.get(target, dir.reversed());
                worst = worst.max(gap.norm());
            }
        }
    }
    Ok(worst)
}

/// Largest violation of each relation over a history of consecutive slices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MasterEquationResiduals {
    /// Forward relation; needs three slices, `None` for a two-slice history.
    pub forward: Option<f64>,
    /// Backward relation.
    pub backward: f64,
    /// Causality identity.
    pub causality: f64,
}

impl MasterEquationResiduals {
    pub fn max(&self) -> f64 {
        self.backward
            .max(self.causality)
            .max(self.forward.unwrap_or(0.0))
    }
}

/// Evaluates the three relations directly on a history of slices. Sites whose
/// stencil leaves an absorbing lattice are skipped.
pub fn master_equation_residuals(
    history: &[CausalFieldPair],
    rates: &TransitionRates,
    spec: &LatticeSpec,
) -> Result<MasterEquationResiduals> {
    if history.len() < 2 {
        return Err(Error::TooFewSlices {
            needed: 2,
            found: history.len(),
        });
    }
    for pair in history {
        pair.check_sites(spec)?;
    }
    for w in history.windows(2) {
        check_adjacent(&w[0], &w[1])?;
    }
    let dt = spec.delta_t();
    let c0 = 1.0 - rates.total() * dt;
    let rate = |dir: Direction| rates.toward(dir) * dt;
    let dirs = [Direction::Plus, Direction::Minus];

    let mut causality: f64 = 0.0;
    let mut backward: f64 = 0.0;
    for w in history.windows(2) {
        causality = causality.max(causality_residual(&w[0], &w[1], spec)?);
        let (now, next) = (&w[0], &w[1]);
        for site in 0..spec.num_sites() {
            for dir in dirs {
                let Some(target) = spec.neighbor(site, dir.sign()) else {
                    continue;
                };
                let lhs = next.backward.get(target, dir.reversed());
                let rhs = now.backward.get(site, dir.reversed()) * c0
                    + now.forward.get(site, dir.reversed()) * rate(dir.reversed())
                    + now.backward.get(site, dir) * rate(dir);
                backward = backward.max((lhs - rhs).norm());
            }
        }
    }

    let mut forward = None;
    for w in history.windows(3) {
        let (prev, now, next) = (&w[0], &w[1], &w[2]);
        let mut worst: f64 = forward.unwrap_or(0.0);
        for site in 0..spec.num_sites() {
            for dir in dirs {
                let (Some(behind), Some(ahead)) =
                    (spec.neighbor(site, -dir.sign()), spec.neighbor(site, dir.sign()))
                else {
                    continue;
                };
                let lhs = now.forward.get(site, dir);
                let rhs = prev.forward.get(behind, dir) * c0
                    + next.backward.get(behind, dir) * rate(dir.reversed())
                    + prev.forward.get(ahead, dir.reversed()) * rate(dir);
                worst = worst.max((lhs - rhs).norm());
            }
        }
        forward = Some(worst);
    }

    Ok(MasterEquationResiduals {
        forward,
        backward,
        causality,
    })
}

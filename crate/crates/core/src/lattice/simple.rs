use num_complex::Complex64;
use rayon::prelude::*;

use super::{DirectedAmplitudeField, LatticeSpec, ScalarKind, TransitionRates};
use crate::error::{Error, Result};

/// Site count above which a step is split across the rayon pool. Every site
/// is computed by the same expression either way, so results do not depend
/// on the schedule.
const PARALLEL_SITES: usize = 1 << 14;

/// How the reversal weight of one step is formed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightMode {
    /// Reversal weight `aΔt`, straight weight `1 − aΔt`.
    Real,
    /// Reversal weight `iε` in place of `aΔt`, straight weight `1 − iε`.
    Imaginary { epsilon: f64 },
}

/// Step weights of the simple master equation.
///
/// `unit_straight` replaces the straight-through weight by exactly 1, the
/// approximation that turns the imaginary kernel into Feynman's amplitude.
/// It is off by default; with it on the weights no longer sum to one and
/// the total amplitude is not conserved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    pub mode: WeightMode,
    pub unit_straight: bool,
}

impl Kernel {
    pub fn real() -> Self {
        Self {
            mode: WeightMode::Real,
            unit_straight: false,
        }
    }

    pub fn imaginary(epsilon: f64) -> Self {
        Self {
            mode: WeightMode::Imaginary { epsilon },
            unit_straight: false,
        }
    }

    pub fn with_unit_straight(mut self) -> Self {
        self.unit_straight = true;
        self
    }

    /// `(straight, reversal)` weights for one step.
    pub fn weights(&self, rates: &TransitionRates, spec: &LatticeSpec) -> (Complex64, Complex64) {
        let reversal = match self.mode {
            WeightMode::Real => Complex64::new(rates.zeta_plus() * spec.delta_t(), 0.0),
            WeightMode::Imaginary { epsilon } => Complex64::new(0.0, epsilon),
        };
        let straight = if self.unit_straight {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(1.0, 0.0) - reversal
        };
        (straight, reversal)
    }

    fn check(
        &self,
        field: &DirectedAmplitudeField,
        rates: &TransitionRates,
        spec: &LatticeSpec,
    ) -> Result<()> {
        field.check_sites(spec)?;
        if rates.zeta_plus() != rates.zeta_minus() {
            return Err(Error::AsymmetricRates {
                plus: rates.zeta_plus(),
                minus: rates.zeta_minus(),
            });
        }
        match self.mode {
            WeightMode::Real => rates.check_against(spec),
            WeightMode::Imaginary { epsilon } => {
                if field.kind() == ScalarKind::Real {
                    return Err(Error::RealFieldImaginaryWeight);
                }
                if !epsilon.is_finite() {
                    return Err(Error::InvalidRates(format!(
                        "epsilon must be finite, got {epsilon}"
                    )));
                }
                Ok(())
            }
        }
    }
}

impl Default for Kernel {
    fn default() -> Self {
        Self::real()
    }
}

/// One step of the simple master equation
///
/// ```text
/// P±(x, t+Δt) = (1 − aΔt)·P±(x ∓ Δz, t) + aΔt·P∓(x ± Δz, t)
/// ```
///
/// with `a = ζ₊ = ζ₋`. Amplitude arriving from outside an absorbing lattice
/// is zero.
pub fn step_simple(
    field: &DirectedAmplitudeField,
    rates: &TransitionRates,
    spec: &LatticeSpec,
    kernel: Kernel,
) -> Result<DirectedAmplitudeField> {
    kernel.check(field, rates, spec)?;
    let (straight, reversal) = kernel.weights(rates, spec);
    Ok(advance(field, spec, straight, reversal))
}

/// `steps` applications of [`step_simple`].
pub fn evolve_simple(
    field: &DirectedAmplitudeField,
    rates: &TransitionRates,
    spec: &LatticeSpec,
    steps: usize,
    kernel: Kernel,
) -> Result<DirectedAmplitudeField> {
    kernel.check(field, rates, spec)?;
    let (straight, reversal) = kernel.weights(rates, spec);
    let mut current = field.clone();
    for _ in 0..steps {
        current = advance(&current, spec, straight, reversal);
    }
    Ok(current)
}

fn advance(
    field: &DirectedAmplitudeField,
    spec: &LatticeSpec,
    straight: Complex64,
    reversal: Complex64,
) -> DirectedAmplitudeField {
    let zero = Complex64::new(0.0, 0.0);
    let plus = field.component(super::Direction::Plus);
    let minus = field.component(super::Direction::Minus);
    let at = |values: &[Complex64], site: usize, offset: i64| {
        spec.neighbor(site, offset).map_or(zero, |s| values[s])
    };
    let update = |site: usize| {
        let from_left = at(plus, site, -1);
        let from_right = at(minus, site, 1);
        (
            straight * from_left + reversal * from_right,
            straight * from_right + reversal * from_left,
        )
    };
    let n = spec.num_sites();
    let (new_plus, new_minus): (Vec<_>, Vec<_>) = if n >= PARALLEL_SITES {
        (0..n).into_par_iter().map(update).unzip()
    } else {
        (0..n).map(update).unzip()
    };
    DirectedAmplitudeField::from_parts(field.kind(), new_plus, new_minus)
}

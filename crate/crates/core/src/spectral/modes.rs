use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::TransitionRates;

/// Which root of `E² = |p|² + m²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyBranch {
    Positive,
    Negative,
}

/// A momentum-energy point with a mass, in units `ħ = c = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumPoint {
    pub p: [f64; 3],
    pub energy: f64,
    pub mass: f64,
}

impl MomentumPoint {
    pub fn new(p: [f64; 3], energy: f64, mass: f64) -> Self {
        Self { p, energy, mass }
    }

    /// Point with `p = (0, 0, p_z)`.
    pub fn along_z(p_z: f64, energy: f64, mass: f64) -> Self {
        Self::new([0.0, 0.0, p_z], energy, mass)
    }

    /// Point whose energy is the chosen root of the dispersion relation.
    pub fn on_shell(p: [f64; 3], mass: f64, branch: EnergyBranch) -> Self {
        let mut point = Self::new(p, 0.0, mass);
        let (upper, lower) = dispersion(&point);
        point.energy = match branch {
            EnergyBranch::Positive => upper,
            EnergyBranch::Negative => lower,
        };
        point
    }

    pub fn p_mag(&self) -> f64 {
        self.p_mag_squared().sqrt()
    }

    pub fn p_mag_squared(&self) -> f64 {
        self.p.iter().map(|x| x * x).sum()
    }

    /// `E² − |p|² − m²`.
    pub fn shell_defect(&self) -> f64 {
        self.energy * self.energy - self.p_mag_squared() - self.mass * self.mass
    }

    pub fn is_on_shell(&self, tolerance: f64) -> bool {
        self.shell_defect().abs() <= tolerance
    }
}

/// `(+√(|p|²+m²), −√(|p|²+m²))`.
pub fn dispersion(point: &MomentumPoint) -> (f64, f64) {
    let e = (point.p_mag_squared() + point.mass * point.mass).sqrt();
    (e, -e)
}

/// Fourier coefficients of the chiral fields at one `(p, E)`: `a±` from the
/// forward-time expansion, `ā±` from the backward-time one.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ModeAmplitudes {
    pub a_plus: Complex64,
    pub a_minus: Complex64,
    pub abar_plus: Complex64,
    pub abar_minus: Complex64,
}

impl ModeAmplitudes {
    pub fn new(forward: [Complex64; 2], backward: [Complex64; 2]) -> Self {
        Self {
            a_plus: forward[0],
            a_minus: forward[1],
            abar_plus: backward[0],
            abar_minus: backward[1],
        }
    }

    pub fn forward(&self) -> [Complex64; 2] {
        [self.a_plus, self.a_minus]
    }

    pub fn backward(&self) -> [Complex64; 2] {
        [self.abar_plus, self.abar_minus]
    }

    pub fn is_zero(&self) -> bool {
        self.forward().iter().chain(&self.backward()).all(|z| z.norm() == 0.0)
    }
}

/// Largest violation of the four mode constraints
///
/// ```text
/// ∓i p a± + i E a± = (ζ± − ζ∓) a∓
/// ∓i p ā± − i E ā± = (ζ± − ζ∓) ā∓
/// ```
///
/// for a point on the z axis (`p` is the signed `p_z`).
pub fn mode_constraint_residual(
    modes: &ModeAmplitudes,
    point: &MomentumPoint,
    rates: &TransitionRates,
) -> Result<f64> {
    if point.p[0] != 0.0 || point.p[1] != 0.0 {
        return Err(Error::NotOneDimensional);
    }
    let i = Complex64::new(0.0, 1.0);
    let (p, e) = (point.p[2], point.energy);
    let skew = rates.zeta_plus() - rates.zeta_minus();
    let residuals = [
        -i * p * modes.a_plus + i * e * modes.a_plus - skew * modes.a_minus,
        i * p * modes.a_minus + i * e * modes.a_minus + skew * modes.a_plus,
        -i * p * modes.abar_plus - i * e * modes.abar_plus - skew * modes.abar_minus,
        i * p * modes.abar_minus - i * e * modes.abar_minus + skew * modes.abar_plus,
    ];
    Ok(residuals.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

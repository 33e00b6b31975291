//! The chain of similarity transforms from the 2×2 mode systems to the
//! Dirac Hamiltonian.
//!
//! 1. `E a = (pσ_z + mσ_y) a` and `E ā = −(pσ_z + mσ_y) ā`.
//! 2. Rephase with `Φ = diag(e^{−iφ/2}, e^{iφ/2})` and stack both systems
//!    into one 4×4 eigenproblem.
//! 3. Swap the two middle components (`Σ`), giving `[[P, −M], [−M, −P]]`
//!    with `P = diag(|p|, −|p|)` and `M = m·I₂`.
//! 4. Rotate `P` by `U_θ` then `U_φ` so it becomes `σ·p`.
//! 5. Conjugate with the block Hadamard `R`, giving `[[M, σ·p], [σ·p, −M]]`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use super::modes::{ModeAmplitudes, MomentumPoint};
use crate::linalg::{FourBlock, TwoBlock};

/// Phase angle for which `α± = a± e^{∓i3π/4}`.
pub const DEFAULT_PHASE: f64 = 1.5 * PI;

/// Phase angle for which the rephased 2×2 blocks carry `−m` off the
/// diagonal, the sign pattern of [`assemble_intermediate`].
pub const NEGATIVE_MASS_PHASE: f64 = 0.5 * PI;

/// Forward-time (`a`) or backward-time (`ā`) mode system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Forward,
    Backward,
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `pσ_z + mσ_y` for the forward branch and its negative for the backward
/// branch, with `p = |p|`.
pub fn build_two_block(point: &MomentumPoint, branch: Branch) -> TwoBlock {
    let h = TwoBlock::sigma_z().scale(point.p_mag()) + TwoBlock::sigma_y().scale(point.mass);
    match branch {
        Branch::Forward => h,
        Branch::Backward => -h,
    }
}

/// `Φ(φ) = diag(e^{−iφ/2}, e^{iφ/2})`.
pub fn phase_matrix(phi: f64) -> TwoBlock {
    TwoBlock::diagonal(
        Complex64::from_polar(1.0, -phi / 2.0),
        Complex64::from_polar(1.0, phi / 2.0),
    )
}

/// `Φ⁻¹ = diag(e^{iφ/2}, e^{−iφ/2})`, which is also the transform applied
/// to the backward amplitudes.
pub fn inverse_phase_matrix(phi: f64) -> TwoBlock {
    phase_matrix(-phi)
}

/// `α = Φ a` and `ᾱ = Φ⁻¹ ā`.
pub fn phase_transform(modes: &ModeAmplitudes, phi: f64) -> ModeAmplitudes {
    ModeAmplitudes::new(
        phase_matrix(phi).apply(modes.forward()),
        inverse_phase_matrix(phi).apply(modes.backward()),
    )
}

/// Undoes [`phase_transform`].
pub fn inverse_phase_transform(modes: &ModeAmplitudes, phi: f64) -> ModeAmplitudes {
    phase_transform(modes, -phi)
}

/// The 2×2 system seen by the rephased amplitudes: `Φ H Φ⁻¹` for the
/// forward branch and `Φ⁻¹ H Φ` for the backward one.
///
/// Off-diagonal entries come out as `−m·e^{−i(φ−π/2)}` in the forward block,
/// so `φ = π/2` gives `−m` and the default `φ = 3π/2` gives `+m`. The two
/// are related by conjugation with `σ_z` and share their spectrum.
pub fn rephased_two_block(point: &MomentumPoint, branch: Branch, phi: f64) -> TwoBlock {
    let h = build_two_block(point, branch);
    match branch {
        Branch::Forward => phase_matrix(phi) * h * inverse_phase_matrix(phi),
        Branch::Backward => inverse_phase_matrix(phi) * h * phase_matrix(phi),
    }
}

/// The stacked 4×4 system acting on `(α₊, α₋, ᾱ₊, ᾱ₋)`:
///
/// ```text
/// [[ p, −m,  0,  0],
///  [−m, −p,  0,  0],
///  [ 0,  0, −p, −m],
///  [ 0,  0, −m,  p]]
/// ```
pub fn assemble_intermediate(point: &MomentumPoint) -> FourBlock {
    let (p, m) = (point.p_mag(), point.mass);
    FourBlock::from_real_rows([
        [p, -m, 0.0, 0.0],
        [-m, -p, 0.0, 0.0],
        [0.0, 0.0, -p, -m],
        [0.0, 0.0, -m, p],
    ])
}

/// Permutation swapping the second and third components.
pub fn sigma_swap() -> FourBlock {
    FourBlock::from_real_rows([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])
}

/// `Σ H Σ`.
pub fn sigma_conjugate(h: &FourBlock) -> FourBlock {
    let s = sigma_swap();
    s * *h * s
}

/// Polar and azimuthal angles of `p`, `θ = atan2(√(p_x²+p_y²), p_z)` and
/// `φ = atan2(p_y, p_x)`. Both are 0 on the degenerate axes.
pub fn rotation_angles(p: [f64; 3]) -> (f64, f64) {
    let transverse = p[0].hypot(p[1]);
    (transverse.atan2(p[2]), p[1].atan2(p[0]))
}

/// `U_θ = [[cos θ/2, sin θ/2], [sin θ/2, −cos θ/2]]`, its own inverse.
pub fn theta_rotation(theta: f64) -> TwoBlock {
    let (s, c) = (theta / 2.0).sin_cos();
    TwoBlock::from_real_rows([[c, s], [s, -c]])
}

/// `U_φ = diag(e^{−iφ/2}, e^{iφ/2})`, whose inverse is its complex conjugate.
pub fn azimuthal_rotation(phi: f64) -> TwoBlock {
    phase_matrix(phi)
}

/// `P″ = diag(|p|, −|p|)`, the momentum block with `p` along the axis.
pub fn aligned_momentum_block(p: [f64; 3]) -> TwoBlock {
    let magnitude = MomentumPoint::new(p, 0.0, 0.0).p_mag();
    TwoBlock::diagonal(real(magnitude), real(-magnitude))
}

/// `P′ = U_θ P″ U_θ = [[p_z, ρ], [ρ, −p_z]]` with `ρ = √(p_x²+p_y²)`.
pub fn primed_momentum_block(p: [f64; 3]) -> TwoBlock {
    let (theta, _) = rotation_angles(p);
    let u = theta_rotation(theta);
    u * aligned_momentum_block(p) * u
}

/// `P = U_φ P′ U_φ* = [[p_z, p_x − i p_y], [p_x + i p_y, −p_z]]`, i.e. `σ·p`.
pub fn rotate_momentum_block(p: [f64; 3]) -> TwoBlock {
    let (_, phi) = rotation_angles(p);
    let u = azimuthal_rotation(phi);
    u * primed_momentum_block(p) * u.adjoint()
}

/// `R = (1/√2)[[I, −I], [I, I]]` in 2×2 blocks; orthogonal.
pub fn block_hadamard() -> FourBlock {
    let i = TwoBlock::identity();
    FourBlock::from_blocks(i, -i, i, i).scale(FRAC_1_SQRT_2)
}

/// The Hamiltonian `[[P, −M], [−M, −P]]` before the final rotation, with the
/// rotated momentum block `P`.
pub fn rotated_hamiltonian(p: [f64; 3], mass: f64) -> FourBlock {
    let big_p = rotate_momentum_block(p);
    let big_m = TwoBlock::identity().scale(mass);
    FourBlock::from_blocks(big_p, -big_m, -big_m, -big_p)
}

/// `R H Rᵀ = [[M, σ·p], [σ·p, −M]] = α·p + βm` in the Dirac representation.
pub fn dirac_form(p: [f64; 3], mass: f64) -> FourBlock {
    let r = block_hadamard();
    r * rotated_hamiltonian(p, mass) * r.transpose()
}

/// `‖(σ·p)² − |p|² I₂‖_max` for the rotated momentum block.
pub fn bilinearization_residual(p: [f64; 3]) -> f64 {
    let block = rotate_momentum_block(p);
    let magnitude_sq = MomentumPoint::new(p, 0.0, 0.0).p_mag_squared();
    (block * block).max_abs_diff(&TwoBlock::identity().scale(magnitude_sq))
}

/// Dirac spinor with `(α·p + βm) u = E u` on the chosen energy branch,
/// normalised to unit length. `spin` selects the upper (0) or lower (1)
/// basis spinor `χ`.
pub fn dirac_spinor(
    p: [f64; 3],
    mass: f64,
    branch: super::EnergyBranch,
    spin: usize,
) -> ([Complex64; 4], f64) {
    let sigma_p = rotate_momentum_block(p);
    let chi = if spin == 0 {
        [real(1.0), real(0.0)]
    } else {
        [real(0.0), real(1.0)]
    };
    let point = MomentumPoint::new(p, 0.0, mass);
    let (energy, _) = super::dispersion(&point);
    let denom = energy + mass;
    let ratio = |v: [Complex64; 2]| {
        if denom == 0.0 {
            [real(0.0); 2]
        } else {
            [v[0] / denom, v[1] / denom]
        }
    };
    let small = ratio(sigma_p.apply(chi));
    let (spinor, e) = match branch {
        super::EnergyBranch::Positive => ([chi[0], chi[1], small[0], small[1]], energy),
        super::EnergyBranch::Negative => ([-small[0], -small[1], chi[0], chi[1]], -energy),
    };
    let norm = spinor.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    (spinor.map(|z| z / norm), e)
}

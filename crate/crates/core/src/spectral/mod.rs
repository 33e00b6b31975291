//! Momentum-energy representation: Fourier amplitudes of the chiral fields,
//! the mode constraints they obey, and the transformation chain that turns
//! those constraints into the Dirac Hamiltonian.

pub mod chain;
pub mod dft;
pub mod modes;

pub use chain::{
    assemble_intermediate, azimuthal_rotation, bilinearization_residual, block_hadamard,
    build_two_block, dirac_form, dirac_spinor, inverse_phase_matrix, inverse_phase_transform,
    phase_matrix, phase_transform, primed_momentum_block, rephased_two_block,
    rotate_momentum_block, rotation_angles, sigma_conjugate, sigma_swap, theta_rotation, Branch,
    DEFAULT_PHASE, NEGATIVE_MASS_PHASE,
};
pub use dft::{dft_forward, dft_inverse, ChiralWindow, ModeSpectrum, SpacetimeGrid};
pub use modes::{dispersion, mode_constraint_residual, EnergyBranch, ModeAmplitudes, MomentumPoint};

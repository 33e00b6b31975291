//! Master-equation route from a light-cone lattice to the 3+1 Dirac equation.
//!
//! The crate follows the derivation step by step, each stage checkable on its
//! own:
//!
//! * [`lattice`]: the simple and the coupled forward/backward master
//!   equations, iterated exactly, plus a path-enumeration oracle.
//! * [`continuum`]: chiral difference fields and residuals of the
//!   differential equations they satisfy as `Δt → 0`.
//! * [`spectral`]: Fourier amplitudes, mode constraints and the chain of
//!   similarity transforms ending in `α·p + βm`.
//! * [`gauge`]: minimal coupling to a four-potential in momentum and
//!   position space.
//!
//! Units are `ħ = c = 1` throughout; the mass is `m = |ζ₊ − ζ₋|`.
//!
//! ```
//! use checkerboard::spectral::dirac_form;
//! use checkerboard::linalg::eig4;
//!
//! let h = dirac_form([1.0, 2.0, 2.0], 4.0);
//! let energies = eig4(&h).unwrap();
//! assert!((energies[0] - 5.0).abs() < 1e-10);
//! assert!((energies[3] + 5.0).abs() < 1e-10);
//! ```

pub mod continuum;
pub mod error;
pub mod gauge;
pub mod lattice;
pub mod linalg;
pub mod spectral;

pub use error::{Error, Result};

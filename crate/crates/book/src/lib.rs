//! The chapters of the guide under `book/src`, one module each, so that
//! `cargo test --doc` runs every code listing.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/lattice.md")]
pub mod lattice {}
#[doc = include_str!("../../../book/src/paths.md")]
pub mod paths {}
#[doc = include_str!("../../../book/src/continuum.md")]
pub mod continuum {}
#[doc = include_str!("../../../book/src/spectral.md")]
pub mod spectral {}
#[doc = include_str!("../../../book/src/gauge.md")]
pub mod gauge {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

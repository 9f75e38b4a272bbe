//! Validated numerics for the linearized operators of a thin annular vortex
//! profile, together with a checker for the resulting spectral certificate.
//!
//! All real quantities are carried as outward-rounded [`Interval`]s.

pub mod cli;
pub mod error;
pub mod interval;
pub mod jet;
pub mod kernels;
pub mod operators;
pub mod profile;
pub mod quadrature;
pub mod spectral;
pub mod verifier;

pub use error::Error;
pub use interval::Interval;
pub use jet::{Jet4, Scalar};
pub use profile::{Params, RegionTag};

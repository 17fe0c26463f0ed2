//! Spectra and photon correlations of a resonantly driven two-level atom whose
//! fluorescence is cascaded into single-mode or multi-mode array filters.
//!
//! The core is generic over the real scalar (`f32` or `f64`); the aliases at
//! the bottom of this file fix it to `f64` for everyday use.

pub mod atom;
pub mod cascade;
pub mod config;
pub mod correlations;
pub mod error;
pub mod oracle;
pub mod response;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Cplx, Real};

pub type AtomParams = config::AtomParams<f64>;
pub type FilterBank = config::FilterBank<f64>;
pub type TwoFilterConfig = config::TwoFilterConfig<f64>;
pub type BlochState = atom::BlochState<f64>;
pub type SystemDescriptor = cascade::SystemDescriptor<f64>;
pub type MomentHierarchy = cascade::MomentHierarchy<f64>;
pub type ResponseCurve = response::ResponseCurve<f64>;

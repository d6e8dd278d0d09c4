//! Exact symbolic engine for the sine-Gordon conserved-current hierarchy.

pub mod error;
pub mod backlund;
pub mod currents;
pub mod jet_algebra;
pub mod renorm_counting;
pub mod wavefront;

pub use error::{Error, Result};

//! Spectral flow, evolution operators and APS-type indices for smooth
//! families of Hermitian matrices.

pub mod counterexample;
pub mod error;
pub mod evolution;
pub mod family;
pub mod index;
pub mod linalg;
pub mod spectral;

pub use error::{Error, Result};
pub use family::HermitianFamily;

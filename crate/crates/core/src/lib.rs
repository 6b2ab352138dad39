//! Exact evaluation and machine verification of fermionant, immanant and cycle-cover identities.

pub mod algebra;
pub mod covers;
mod error;
pub mod gadgets;
pub mod interpolation;
pub mod reductions;
pub mod sampling;
pub mod young;

pub use error::{Error, Result};

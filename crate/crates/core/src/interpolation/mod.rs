//! Recovering cycle-count strata from fermionant values of replicated graphs, and the modular
//! chain that brings everything down to {0,1} graphs.

mod modular;
mod theorem;
mod vandermonde;

pub use modular::*;
pub use theorem::*;
pub use vandermonde::*;

//! Gadget construction, search and certification.

mod iff;
mod lemmas;
mod weights;
mod wiring;

pub use iff::*;
pub use lemmas::*;
pub use weights::*;
pub use wiring::*;

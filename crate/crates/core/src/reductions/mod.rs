//! Immanant reductions: cycle-padded matrices, the two-column branch identities, and the
//! coefficient ledgers that rebuild Ferm_2 from square or constant-δ immanant oracles.

mod ledger;
mod padding;
mod squares;
mod families;
mod two_column;

pub use ledger::*;
pub use padding::*;
pub use squares::*;
pub use families::*;
pub use two_column::*;

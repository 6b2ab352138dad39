//! Weighted digraphs, cycle covers and scalar evaluators.

mod dense;
mod enumerate;
mod graph;
mod sparse;

pub use dense::{determinant_exact, fermionant, fermionant_dp, hamiltonian, permanent_brute, permanent_ryser};
pub use enumerate::{cover_weight, cycle_covers, for_each_cover, stratified_weights, CycleCover, StratifiedWeights};
pub use graph::WeightedDigraph;
pub use sparse::{fermionant_sparse, fermionant_sparse_with_order, greedy_order};

/// Sign convention for the fermionant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    /// Σ_π (−k)^{c(π)} Π A_{i,π(i)}
    Plain,
    /// (−1)^n times the plain value.
    Signed,
}

impl std::str::FromStr for Convention {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "plain" => Ok(Convention::Plain),
            "signed" => Ok(Convention::Signed),
            other => Err(crate::Error::Parse(format!("unknown convention `{other}` (expected plain|signed)"))),
        }
    }
}

//! Young diagrams, border strips, Murnaghan–Nakayama characters, immanants and the
//! character expansion of the fermionant.

mod characters;
mod decomposition;
mod diagram;

pub use characters::{character_by_cycle_sequence, class_sums, immanant, mn_character, ClassSums};
pub use decomposition::{
    content_product_coeff, decomposition_coeffs, diagrams_with_max_columns, verify_decomposition, DecompositionReport,
    DecompositionTable,
};
pub use diagram::{skew_hooks, SkewHook, YoungDiagram};

//! Exact rationals, square matrices and symmetric-group primitives.

mod linear;
mod matrix;
mod partition;
mod permutation;
mod rational;

pub use linear::{solve_linear, solve_linear_particular};
pub use matrix::RationalMatrix;
pub use partition::{factorial, Partition};
pub use permutation::{permutations, Permutation, Permutations};
pub use rational::{frac, int, parse_rational, pow, text as rational_text, Rational};
pub(crate) use rational::is_integer;

/// Enumeration cap used when nothing else is configured.
pub const DEFAULT_CAP: usize = 9;

/// Upper bound on brute-force enumeration sizes.
///
/// A computation over n objects is allowed when `n <= cap`. Support-aware
/// enumerators additionally accept larger n when the product of branching
/// factors does not exceed `cap!`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cap(pub usize);

impl Default for Cap {
    fn default() -> Self {
        Cap(DEFAULT_CAP)
    }
}

impl Cap {
    pub fn check(self, n: usize, what: &str) -> crate::Result<()> {
        if n > self.0 {
            return Err(crate::Error::EnumerationTooLarge { what: format!("{what} (n = {n})"), cap: self.0 });
        }
        Ok(())
    }

    /// Accepts when `n <= cap` or the product of `branching` stays within `cap!`.
    pub fn check_branching(self, n: usize, branching: impl IntoIterator<Item = usize>, what: &str) -> crate::Result<()> {
        if n <= self.0 {
            return Ok(());
        }
        let limit: u128 = (1..=self.0 as u128).product();
        let mut prod: u128 = 1;
        for b in branching {
            prod = prod.saturating_mul(b as u128);
            if prod > limit {
                return Err(crate::Error::EnumerationTooLarge { what: format!("{what} (n = {n})"), cap: self.0 });
            }
        }
        Ok(())
    }
}

use num_traits::One;

use crate::algebra::{Cap, RationalMatrix, Rational};
use crate::covers::determinant_exact;
use crate::young::{class_sums, immanant, skew_hooks, ClassSums, YoungDiagram};
use crate::{Error, Result};

/// A ⊕ C_l, where C_l is the permutation matrix of the cycle 1 → 2 → … → l → 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaddedMatrix {
    pub base: RationalMatrix,
    /// 0 for the unpadded matrix.
    pub cycle: usize,
    pub composite: RationalMatrix,
}

impl PaddedMatrix {
    pub fn unpadded(a: &RationalMatrix) -> Self {
        PaddedMatrix { base: a.clone(), cycle: 0, composite: a.clone() }
    }
}

pub fn cycle_matrix(l: usize) -> RationalMatrix {
    let mut c = RationalMatrix::zeros(l);
    for i in 1..=l {
        c.set(i, i % l + 1, Rational::one());
    }
    c
}

pub fn pad_with_cycle(a: &RationalMatrix, l: usize) -> Result<PaddedMatrix> {
    if l == 0 {
        return Err(Error::InvalidParameter("the padding cycle needs length at least 1".into()));
    }
    Ok(PaddedMatrix { base: a.clone(), cycle: l, composite: a.direct_sum(&cycle_matrix(l)) })
}

/// Two-column diagram from its column lengths `c1 ≥ c2 ≥ 0`.
pub fn two_column(c1: usize, c2: usize) -> Result<YoungDiagram> {
    if c1 < c2 || c1 == 0 {
        return Err(Error::InvalidPartition(format!("columns [{c1},{c2}] do not form a diagram")));
    }
    YoungDiagram::from_columns(&[c1, c2])
}

/// Column lengths of a diagram with at most two columns.
pub fn column_pair(y: &YoungDiagram) -> (usize, usize) {
    let c = y.columns();
    (c.first().copied().unwrap_or(0), c.get(1).copied().unwrap_or(0))
}

/// Murnaghan–Nakayama step for one extra cycle of length s: Σ_ξ (−1)^{ht ξ} [Y ∖ ξ].
pub fn mn_expansion(y: &YoungDiagram, s: usize) -> Vec<(YoungDiagram, i64)> {
    if s == 0 {
        return vec![(y.clone(), 1)];
    }
    skew_hooks(y, s).into_iter().map(|h| (h.remainder, if h.height % 2 == 0 { 1 } else { -1 })).collect()
}

/// Anything that can evaluate an immanant of a padded matrix.
pub trait ImmanantOracle {
    fn immanant(&mut self, y: &YoungDiagram, m: &PaddedMatrix) -> Result<Rational>;
}

/// Exploits the block structure: the padding cycle has exactly one cover, so im_Y(A ⊕ C_l) is
/// a character sum over the covers of A alone. Class sums are cached per base matrix.
#[derive(Default)]
pub struct ClassSumOracle {
    pub cap: Cap,
    cache: Option<(RationalMatrix, ClassSums)>,
    pub calls: usize,
}

impl ClassSumOracle {
    pub fn new(cap: Cap) -> Self {
        ClassSumOracle { cap, cache: None, calls: 0 }
    }

    pub fn sums(&mut self, a: &RationalMatrix) -> Result<&ClassSums> {
        if self.cache.as_ref().is_none_or(|(m, _)| m != a) {
            self.cache = Some((a.clone(), class_sums(a, self.cap)?));
        }
        Ok(&self.cache.as_ref().unwrap().1)
    }
}

impl ImmanantOracle for ClassSumOracle {
    fn immanant(&mut self, y: &YoungDiagram, m: &PaddedMatrix) -> Result<Rational> {
        self.calls += 1;
        let cycle = m.cycle;
        self.sums(&m.base)?.padded_immanant(y, cycle)
    }
}

/// Enumerates the composite matrix directly; independent of the block shortcut.
pub struct BruteForceOracle {
    pub cap: Cap,
}

impl ImmanantOracle for BruteForceOracle {
    fn immanant(&mut self, y: &YoungDiagram, m: &PaddedMatrix) -> Result<Rational> {
        immanant(y, &m.composite, self.cap)
    }
}

/// im_Y(A) for a diagram the caller is allowed to evaluate directly: the determinant for a single
/// column, otherwise the class-sum evaluator standing in for a bounded-width algorithm.
pub fn direct_immanant(y: &YoungDiagram, a: &RationalMatrix, sums: &ClassSums) -> Result<Rational> {
    if y.column_count() == 1 && y.weight() == a.n() {
        return Ok(determinant_exact(a));
    }
    sums.immanant(y)
}

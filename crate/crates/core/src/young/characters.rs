use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::{skew_hooks, YoungDiagram};
use crate::algebra::{Cap, Partition, Permutation, Rational, RationalMatrix};
use crate::covers::{for_each_cover, WeightedDigraph};
use crate::{Error, Result};

thread_local! {
    static MEMO: RefCell<HashMap<(Vec<usize>, Vec<usize>), i64>> = RefCell::new(HashMap::new());
}

/// χ_Y at cycle type `t` by the Murnaghan–Nakayama recursion, largest cycle first.
pub fn mn_character(y: &YoungDiagram, t: &Partition) -> Result<i64> {
    if y.weight() != t.weight() {
        return Err(Error::Dimension(format!("diagram {y} has weight {}, cycle type {t} has weight {}", y.weight(), t.weight())));
    }
    Ok(memo_char(y, t.parts()))
}

fn memo_char(y: &YoungDiagram, t: &[usize]) -> i64 {
    if t.is_empty() {
        return 1;
    }
    let key = (y.rows().to_vec(), t.to_vec());
    if let Some(v) = MEMO.with(|m| m.borrow().get(&key).copied()) {
        return v;
    }
    let v = skew_hooks(y, t[0])
        .into_iter()
        .map(|h| {
            let sub = memo_char(&h.remainder, &t[1..]);
            if h.height % 2 == 0 {
                sub
            } else {
                -sub
            }
        })
        .sum();
    MEMO.with(|m| m.borrow_mut().insert(key, v));
    v
}

/// Same recursion, consuming cycle lengths in the given order and without memoization.
pub fn character_by_cycle_sequence(y: &YoungDiagram, lengths: &[usize]) -> Result<i64> {
    if y.weight() != lengths.iter().sum::<usize>() {
        return Err(Error::Dimension(format!("diagram {y} and cycle lengths {lengths:?} differ in weight")));
    }
    fn rec(y: &YoungDiagram, l: &[usize]) -> i64 {
        match l.split_first() {
            None => 1,
            Some((&first, rest)) => skew_hooks(y, first)
                .into_iter()
                .map(|h| if h.height % 2 == 0 { rec(&h.remainder, rest) } else { -rec(&h.remainder, rest) })
                .sum(),
        }
    }
    Ok(rec(y, lengths))
}

/// Σ_π χ_Y(π) Π A_{i,π(i)}, enumerating only permutations supported on nonzero entries.
pub fn immanant(y: &YoungDiagram, a: &RationalMatrix, cap: Cap) -> Result<Rational> {
    let n = a.n();
    if y.weight() != n {
        return Err(Error::Dimension(format!("diagram {y} has weight {}, matrix is {n}x{n}", y.weight())));
    }
    let g = WeightedDigraph::from_matrix(a);
    let mut chars: HashMap<Partition, i64> = HashMap::new();
    let mut total = Rational::zero();
    for_each_cover(&g, cap, |images| {
        let t = Permutation::from_images0(images.to_vec()).cycle_type();
        let chi = *chars.entry(t.clone()).or_insert_with(|| memo_char(y, t.parts()));
        if chi == 0 {
            return;
        }
        let mut w = Rational::from_integer(chi.into());
        for (i, &j) in images.iter().enumerate() {
            w *= a.at(i, j);
        }
        total += w;
    })?;
    Ok(total)
}

/// Total cover weight of a matrix per cycle type. Every immanant of the matrix, with or without
/// an extra disjoint cycle, is a character-weighted sum of these.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSums {
    pub n: usize,
    pub sums: BTreeMap<Partition, Rational>,
}

pub fn class_sums(a: &RationalMatrix, cap: Cap) -> Result<ClassSums> {
    let g = WeightedDigraph::from_matrix(a);
    let mut sums: BTreeMap<Partition, Rational> = BTreeMap::new();
    for_each_cover(&g, cap, |images| {
        let t = Permutation::from_images0(images.to_vec()).cycle_type();
        let mut w = Rational::one();
        for (i, &j) in images.iter().enumerate() {
            w *= a.at(i, j);
        }
        *sums.entry(t).or_insert_with(Rational::zero) += w;
    })?;
    Ok(ClassSums { n: a.n(), sums })
}

impl ClassSums {
    pub fn immanant(&self, y: &YoungDiagram) -> Result<Rational> {
        self.padded_immanant(y, 0)
    }

    /// im_Y of A ⊕ (unit-weight cycle of length `extra`); `extra = 0` means no padding.
    pub fn padded_immanant(&self, y: &YoungDiagram, extra: usize) -> Result<Rational> {
        if y.weight() != self.n + extra {
            return Err(Error::Dimension(format!("diagram {y} has weight {}, padded matrix is {}", y.weight(), self.n + extra)));
        }
        let mut total = Rational::zero();
        for (t, w) in &self.sums {
            let mut parts = t.parts().to_vec();
            if extra > 0 {
                parts.push(extra);
            }
            let chi = memo_char(y, Partition::from_unsorted(parts).parts());
            if chi != 0 {
                total += w * Rational::from_integer(chi.into());
            }
        }
        Ok(total)
    }

    /// Plain fermionant Σ_t (−k)^{len t} W_t.
    pub fn fermionant(&self, k: &Rational) -> Rational {
        let mk = -k.clone();
        self.sums.iter().map(|(t, w)| w * crate::algebra::pow(&mk, t.len() as i64)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn yd(rows: &[usize]) -> YoungDiagram {
        YoungDiagram::from_rows(rows).unwrap()
    }

    fn pt(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn hook_shape_values() {
        let y = yd(&[2, 1]);
        assert_eq!(mn_character(&y, &pt(&[1, 1, 1])).unwrap(), 2);
        assert_eq!(mn_character(&y, &pt(&[2, 1])).unwrap(), 0);
        assert_eq!(mn_character(&y, &pt(&[3])).unwrap(), -1);
    }

    #[test]
    fn trivial_and_sign() {
        for n in 1..=6 {
            for t in Partition::all(n) {
                assert_eq!(mn_character(&yd(&[n]), &t).unwrap(), 1);
                let sign = if (n - t.len()) % 2 == 0 { 1 } else { -1 };
                assert_eq!(mn_character(&yd(&vec![1; n]), &t).unwrap(), sign);
            }
        }
    }

    #[test]
    fn weight_mismatch() {
        assert!(mn_character(&yd(&[2, 1]), &pt(&[2])).is_err());
    }

    #[test]
    fn known_values_for_s4() {
        // rows of the S4 character table, classes [1^4],[2,1,1],[2,2],[3,1],[4]
        let classes = [pt(&[1, 1, 1, 1]), pt(&[2, 1, 1]), pt(&[2, 2]), pt(&[3, 1]), pt(&[4])];
        let table: [(&[usize], [i64; 5]); 3] =
            [(&[3, 1], [3, 1, -1, 0, -1]), (&[2, 2], [2, 0, 2, -1, 0]), (&[2, 1, 1], [3, -1, -1, 0, 1])];
        for (rows, vals) in table {
            for (c, v) in classes.iter().zip(vals) {
                assert_eq!(mn_character(&yd(rows), c).unwrap(), v, "{rows:?} at {c}");
            }
        }
    }
}

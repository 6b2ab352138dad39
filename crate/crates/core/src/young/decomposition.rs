use std::collections::BTreeMap;

use num_traits::Zero;

use super::{immanant, mn_character, YoungDiagram};
use crate::algebra::{pow, Cap, Partition, Rational, RationalMatrix};
use crate::covers::{fermionant, Convention};
use crate::{Error, Result};

/// Diagrams with `n` boxes and at most `k` columns, largest first row first.
pub fn diagrams_with_max_columns(n: usize, k: usize) -> Vec<YoungDiagram> {
    Partition::all_with_max_part(n, k).into_iter().map(YoungDiagram::new).collect()
}

/// Coefficients `d_Y` with Ferm_k(A) = Σ_Y d_Y im_Y(A) in the plain convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionTable {
    pub n: usize,
    pub k: Rational,
    /// Nonzero coefficients only.
    pub coeffs: BTreeMap<YoungDiagram, Rational>,
}

impl DecompositionTable {
    pub fn get(&self, y: &YoungDiagram) -> Rational {
        self.coeffs.get(y).cloned().unwrap_or_else(Rational::zero)
    }
}

/// Projects the class function π ↦ (−k)^{c(π)} onto the irreducible characters.
pub fn decomposition_coeffs(n: usize, k: &Rational, cap: Cap) -> Result<DecompositionTable> {
    cap.check(n, "character projection")?;
    let classes = Partition::all(n);
    let mk = -k.clone();
    let fact = Rational::from_integer(crate::algebra::factorial(n));
    let mut coeffs = BTreeMap::new();
    for rows in Partition::all(n) {
        let y = YoungDiagram::new(rows);
        let mut acc = Rational::zero();
        for t in &classes {
            let chi = mn_character(&y, t)?;
            if chi != 0 {
                acc += Rational::from_integer(t.class_size() * chi) * pow(&mk, t.len() as i64);
            }
        }
        let d = acc / &fact;
        if !d.is_zero() {
            coeffs.insert(y, d);
        }
    }
    Ok(DecompositionTable { n, k: k.clone(), coeffs })
}

/// (dim Y / n!) Π_{cells (i,j)} (−k + j − i), used as an independent oracle.
pub fn content_product_coeff(y: &YoungDiagram, k: &Rational) -> Rational {
    let n = y.weight();
    let ones = Partition::from_unsorted(vec![1; n]);
    let dim = mn_character(y, &ones).expect("weights agree");
    let mut prod = Rational::from_integer(dim.into());
    for (i, &len) in y.rows().iter().enumerate() {
        for j in 0..len {
            prod *= -k.clone() + Rational::from_integer((j as i64 - i as i64).into());
        }
    }
    prod / Rational::from_integer(crate::algebra::factorial(n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    pub plain_fermionant: Rational,
    pub signed_fermionant: Rational,
    pub immanant_sum: Rational,
    pub plain_holds: bool,
    pub signed_holds: bool,
}

/// Compares both fermionant conventions against Σ_Y d_Y im_Y(A).
pub fn verify_decomposition(a: &RationalMatrix, k: &Rational, cap: Cap) -> Result<DecompositionReport> {
    let n = a.n();
    let table = decomposition_coeffs(n, k, cap)?;
    let mut sum = Rational::zero();
    for (y, d) in &table.coeffs {
        sum += d * immanant(y, a, cap)?;
    }
    let plain = fermionant(a, k, Convention::Plain, cap)?;
    let signed = fermionant(a, k, Convention::Signed, cap)?;
    if table.coeffs.keys().any(|y| y.weight() != n) {
        return Err(Error::Dimension("table built for a different n".into()));
    }
    Ok(DecompositionReport {
        plain_holds: plain == sum,
        signed_holds: signed == sum,
        plain_fermionant: plain,
        signed_fermionant: signed,
        immanant_sum: sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{frac, int};

    #[test]
    fn n_two_k_two() {
        let t = decomposition_coeffs(2, &int(2), Cap::default()).unwrap();
        assert_eq!(t.get(&YoungDiagram::from_rows(&[2]).unwrap()), int(1));
        assert_eq!(t.get(&YoungDiagram::from_rows(&[1, 1]).unwrap()), int(3));
    }

    #[test]
    fn support_has_at_most_k_columns() {
        for n in 1..=6 {
            for k in 1..=3i64 {
                let t = decomposition_coeffs(n, &int(k), Cap::default()).unwrap();
                assert!(t.coeffs.keys().all(|y| y.column_count() <= k as usize));
            }
        }
    }

    #[test]
    fn content_formula_small() {
        for k in [int(2), frac(1, 2), int(-1)] {
            let t = decomposition_coeffs(4, &k, Cap::default()).unwrap();
            for y in diagrams_with_max_columns(4, 4) {
                assert_eq!(t.get(&y), content_product_coeff(&y, &k));
            }
        }
    }

    #[test]
    fn diagram_lists() {
        let s = |n, k| diagrams_with_max_columns(n, k).iter().map(|y| y.to_string()).collect::<Vec<_>>();
        assert_eq!(s(2, 2), vec!["[2]", "[1,1]"]);
        assert_eq!(s(4, 2), vec!["[2,2]", "[2,1,1]", "[1,1,1,1]"]);
        assert_eq!(s(3, 1), vec!["[1,1,1]"]);
    }
}

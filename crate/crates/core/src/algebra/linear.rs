use num_traits::Zero;

use super::rational::Rational;
use crate::{Error, Result};

/// Exact solution of `rows · x = rhs` for a system with at least as many equations as unknowns.
///
/// The system must have full column rank and be consistent; extra equations are checked, not
/// dropped.
pub fn solve_linear(rows: &[Vec<Rational>], rhs: &[Rational]) -> Result<Vec<Rational>> {
    let (x, free) = solve_linear_particular(rows, rhs)?;
    if let Some(c) = free.first() {
        return Err(Error::Singular(format!("unknown {} is not determined", c + 1)));
    }
    Ok(x)
}

/// Like [`solve_linear`] but tolerates rank deficiency: columns without a pivot are free and set
/// to zero, and their indices are returned. Pivots are taken in column order, so listing the
/// preferred unknowns first makes them the pivots.
pub fn solve_linear_particular(rows: &[Vec<Rational>], rhs: &[Rational]) -> Result<(Vec<Rational>, Vec<usize>)> {
    let m = rows.len();
    if rhs.len() != m {
        return Err(Error::Dimension(format!("{m} equations but {} right-hand sides", rhs.len())));
    }
    let n = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension("ragged coefficient rows".into()));
    }
    let mut a: Vec<Vec<Rational>> = rows.iter().zip(rhs).map(|(r, b)| r.iter().cloned().chain([b.clone()]).collect()).collect();
    let mut pivots = Vec::new();
    let mut free = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..m).find(|&i| !a[i][col].is_zero()) else {
            free.push(col);
            continue;
        };
        a.swap(row, p);
        let piv = a[row][col].clone();
        for x in a[row].iter_mut() {
            *x /= &piv;
        }
        let pivot_row = a[row].clone();
        for (i, r) in a.iter_mut().enumerate() {
            if i != row && !r[col].is_zero() {
                let f = r[col].clone();
                for (x, y) in r.iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if let Some(i) = (row..m).find(|&i| !a[i][n].is_zero()) {
        return Err(Error::Singular(format!("equation {} is inconsistent with the others", i + 1)));
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = a[r][n].clone();
    }
    Ok((x, free))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{frac, int};

    #[test]
    fn square_and_overdetermined() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        assert_eq!(solve_linear(&a, &[int(3), int(5)]).unwrap(), vec![frac(4, 5), frac(7, 5)]);
        let mut b = a.clone();
        b.push(vec![int(1), int(1)]);
        assert_eq!(solve_linear(&b, &[int(3), int(5), frac(11, 5)]).unwrap(), vec![frac(4, 5), frac(7, 5)]);
        assert!(matches!(solve_linear(&b, &[int(3), int(5), int(2)]), Err(Error::Singular(_))));
    }

    #[test]
    fn rank_deficient() {
        let a = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(matches!(solve_linear(&a, &[int(1), int(2)]), Err(Error::Singular(_))));
        let (x, free) = solve_linear_particular(&a, &[int(1), int(2)]).unwrap();
        assert_eq!((x, free), (vec![int(1), int(0)], vec![1]));
    }
}

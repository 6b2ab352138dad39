use std::collections::HashSet;

use crate::algebra::{pow, solve_linear, Rational};
use crate::{Error, Result};

/// Rows `[x, x², …, x^N]` for each node x.
pub fn vandermonde_rows(nodes: &[Rational]) -> Vec<Vec<Rational>> {
    nodes.iter().map(|x| (1..=nodes.len()).map(|m| pow(x, m as i64)).collect()).collect()
}

fn check_nodes(nodes: &[Rational]) -> Result<()> {
    let mut seen = HashSet::new();
    for x in nodes {
        if !seen.insert(x) {
            return Err(Error::DegenerateNodes(format!("node {x} appears twice")));
        }
    }
    Ok(())
}

/// Solves Σ_{m=1}^{N} c_m · x_l^m = v_l for the coefficients c_1..c_N.
pub fn vandermonde_solve(nodes: &[Rational], values: &[Rational]) -> Result<Vec<Rational>> {
    if nodes.len() != values.len() {
        return Err(Error::Dimension(format!("{} nodes but {} values", nodes.len(), values.len())));
    }
    check_nodes(nodes)?;
    solve_linear(&vandermonde_rows(nodes), values)
}

/// Row m (1-based) of the inverse system: weights w with c_m = Σ_l w_l · v_l.
pub fn vandermonde_inverse_row(nodes: &[Rational], m: usize) -> Result<Vec<Rational>> {
    check_nodes(nodes)?;
    let rows = vandermonde_rows(nodes);
    let n = nodes.len();
    if m == 0 || m > n {
        return Err(Error::InvalidParameter(format!("row {m} outside 1..={n}")));
    }
    let transposed: Vec<Vec<Rational>> = (0..n).map(|j| (0..n).map(|i| rows[i][j].clone()).collect()).collect();
    let unit: Vec<Rational> = (1..=n).map(|j| if j == m { Rational::from_integer(1.into()) } else { Rational::from_integer(0.into()) }).collect();
    solve_linear(&transposed, &unit)
}

/// Σ_m c_m x^m for each node.
pub fn vandermonde_eval(nodes: &[Rational], coeffs: &[Rational]) -> Vec<Rational> {
    nodes.iter().map(|x| coeffs.iter().enumerate().map(|(m, c)| c * pow(x, m as i64 + 1)).sum()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{frac, int};

    #[test]
    fn one_node() {
        assert_eq!(vandermonde_solve(&[int(1)], &[frac(7, 3)]).unwrap(), vec![frac(7, 3)]);
    }

    #[test]
    fn powers_of_minus_two() {
        let nodes = [int(-2), int(4)];
        let c = [frac(3, 2), int(-5)];
        let v = vandermonde_eval(&nodes, &c);
        assert_eq!(vandermonde_solve(&nodes, &v).unwrap(), c.to_vec());
        let w = vandermonde_inverse_row(&nodes, 1).unwrap();
        assert_eq!(w.iter().zip(&v).map(|(a, b)| a * b).sum::<Rational>(), c[0]);
    }

    #[test]
    fn duplicate_nodes() {
        assert!(matches!(vandermonde_solve(&[int(2), int(2)], &[int(1), int(1)]), Err(Error::DegenerateNodes(_))));
    }
}

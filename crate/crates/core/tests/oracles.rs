//! Fixed values, each worked out by hand or by an evaluator independent of the one under test.

use fermionant::algebra::{frac, int, Cap, Partition, Rational, RationalMatrix};
use fermionant::covers::{fermionant, permanent_ryser, stratified_weights, Convention, WeightedDigraph};
use fermionant::gadgets::{eliminate_weights, fermionant_by_contraction, gamma_of_weight, search_iff_wiring};
use fermionant::interpolation::*;
use fermionant::reductions::*;
use fermionant::young::*;
use num_bigint::BigInt;
use num_traits::{One, Zero};

fn mat(rows: &[&[i64]]) -> RationalMatrix {
    RationalMatrix::from_i64(rows).unwrap()
}

fn yd(rows: &[usize]) -> YoungDiagram {
    YoungDiagram::from_rows(rows).unwrap()
}

#[test]
fn characters_of_the_hook_two_one() {
    let y = yd(&[2, 1]);
    let chi = |t: &[usize]| mn_character(&y, &Partition::new(t.to_vec()).unwrap()).unwrap();
    assert_eq!((chi(&[1, 1, 1]), chi(&[2, 1]), chi(&[3])), (2, 0, -1));
}

#[test]
fn n2_k2_coefficients() {
    // (1/2)(χ(e)·4 + χ(τ)·(−2)): 1 for the row, 3 for the column
    let d = decomposition_coeffs(2, &int(2), Cap::default()).unwrap();
    assert_eq!(d.get(&yd(&[2])), int(1));
    assert_eq!(d.get(&yd(&[1, 1])), int(3));
}

#[test]
fn k_minus_one_decomposition_is_the_permanent() {
    let a = mat(&[&[1, 2, 0], &[-1, 3, 1], &[2, 2, 5]]);
    let d = decomposition_coeffs(3, &int(-1), Cap::default()).unwrap();
    let total: Rational = d.coeffs.iter().map(|(y, c)| c * immanant(y, &a, Cap::default()).unwrap()).sum();
    assert_eq!(total, permanent_ryser(&a));
}

#[test]
fn column_coefficient_at_k2() {
    // content product over a single column: Π (−2 − i) / n! = (−1)^n (n+1)
    for n in 1..=6 {
        let d = decomposition_coeffs(n, &int(2), Cap::default()).unwrap();
        let want = if n % 2 == 0 { n as i64 + 1 } else { -(n as i64) - 1 };
        assert_eq!(d.get(&YoungDiagram::from_columns(&[n]).unwrap()), int(want));
    }
}

#[test]
fn border_strips_of_two_one() {
    let hooks = skew_hooks(&yd(&[2, 1]), 3);
    assert_eq!(hooks.len(), 1);
    assert_eq!(hooks[0].height, 1);
    assert!(hooks[0].remainder.is_empty());
}

#[test]
fn square_strips_give_two_remainders() {
    // [3,3] in column lengths, n = 4: size 2 strips leave [3,1] and [2,2]
    let y = two_column(3, 3).unwrap();
    let mut rem: Vec<_> = skew_hooks(&y, 2).into_iter().map(|h| column_pair(&h.remainder)).collect();
    rem.sort();
    assert_eq!(rem, vec![(2, 2), (3, 1)]);
}

#[test]
fn vandermonde_recovers_known_strata() {
    let nodes = [int(-2), int(4)];
    let c = [int(3), frac(-1, 2)];
    let values = vandermonde_eval(&nodes, &c);
    // 3·(−2) − 1/2·4 and 3·4 − 1/2·16
    assert_eq!(values, vec![int(-8), int(4)]);
    assert_eq!(vandermonde_solve(&nodes, &values).unwrap(), c.to_vec());
}

#[test]
fn two_vertex_strata_at_k2() {
    let (x11, x12, x21, x22) = (frac(3, 2), int(-2), int(5), frac(1, 3));
    let a = RationalMatrix::from_rows(vec![vec![x11.clone(), x12.clone()], vec![x21.clone(), x22.clone()]]).unwrap();
    let g = WeightedDigraph::from_matrix(&a);
    let w = search_iff_wiring(&int(2)).unwrap();
    let s = recover_stratified(&g, &int(2), &w).unwrap();
    assert_eq!(s.get(1), x12 * x21);
    assert_eq!(s.get(2), x11 * x22);
}

#[test]
fn graph_without_covers_recovers_zero() {
    let mut g = WeightedDigraph::new(2);
    g.add_edge(1, 2, int(3)).unwrap();
    let w = search_iff_wiring(&int(2)).unwrap();
    let s = recover_stratified(&g, &int(2), &w).unwrap();
    assert!(s.by_cycles.values().all(Zero::is_zero));
    assert_eq!(s, stratified_weights(&g, Cap::default()).unwrap());
}

#[test]
fn hamiltonian_of_all_ones_three() {
    let a = mat(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]);
    assert_eq!(hamiltonian_via_fermionant_auto(&a, &int(2)).unwrap(), int(2));
}

#[test]
fn two_by_two_at_k3_is_the_off_diagonal_product() {
    let a = mat(&[&[2, 3], &[5, 7]]);
    assert_eq!(hamiltonian_via_fermionant_auto(&a, &int(3)).unwrap(), int(15));
}

#[test]
fn degenerate_k_is_refused() {
    let a = mat(&[&[1, 1], &[1, 1]]);
    for k in [int(1), int(-1)] {
        assert!(matches!(hamiltonian_via_fermionant_auto(&a, &k), Err(fermionant::Error::DegenerateNodes(_))));
    }
    assert!(matches!(hamiltonian_via_fermionant_auto(&a, &int(0)), Err(fermionant::Error::InvalidParameter(_))));
}

#[test]
fn weight_twenty_has_branches_for_bits_two_and_four() {
    let mut g = WeightedDigraph::new(2);
    g.add_edge(1, 2, int(20)).unwrap();
    g.add_edge(2, 1, int(1)).unwrap();
    let k = int(2);
    let e = eliminate_weights(&g, &k, &BigInt::from(1000)).unwrap();
    assert_eq!(e.blocks.len(), 1);
    assert_eq!(e.blocks[0].diamonds, 2 + 4);
    assert!(!e.blocks[0].direct_edge);
    // loop gadgets: 3i − 1 per bit i, each shifting the cycle count by one
    assert_eq!(e.gamma, 5 + 11);
    assert_eq!(gamma_of_weight(&BigInt::from(20), 1, 2), 16);
    let (v, _) = fermionant_by_contraction(&e.graph, &e.top_blocks(), &k).unwrap();
    // Ferm of the 2-cycle is 20·(−2) and each extra cycle contributes −2
    assert_eq!(v, int(-40) * int(-2).pow(16));
}

#[test]
fn modular_chain_on_the_identity() {
    let r = modular_pipeline(&RationalMatrix::identity(2), &int(2), &ModularOptions::default()).unwrap();
    assert!(r.holds());
    assert!(r.hamiltonian.is_zero());
    assert!(r.lhs.is_zero() && r.rhs.is_zero());
}

#[test]
fn alpha_ledger_n4() {
    let d = decomposition_coeffs(4, &int(2), Cap::default()).unwrap();
    let l = alpha_coeffs(4, &d).unwrap();
    assert_eq!(l.coeff("det"), Some(&int(5)));
    assert_eq!(l.coeff("alpha_3"), Some(&int(-3)));
    assert_eq!(l.coeff("square"), Some(&int(4)));
}

#[test]
fn ferm2_of_the_identity() {
    // one cover, n fixed points: (−2)^n
    for n in [2, 4, 6] {
        let mut o = ClassSumOracle::new(Cap::default());
        let got = ferm2_via_square_immanants(&RationalMatrix::identity(n), &mut o, Cap::default()).unwrap();
        assert_eq!(got, int(-2).pow(n as i32));
        assert_eq!(got, fermionant(&RationalMatrix::identity(n), &int(2), Convention::Plain, Cap::default()).unwrap());
    }
}

#[test]
fn padded_cycle_of_length_one_adds_a_fixed_point() {
    let a = mat(&[&[1, 2], &[3, 4]]);
    let p = pad_with_cycle(&a, 1).unwrap();
    assert_eq!(p.composite, a.direct_sum(&RationalMatrix::identity(1)));
    assert!(pad_with_cycle(&a, 0).is_err());
}

#[test]
fn bare_cycle_single_hook() {
    // im of a single column on the cycle permutation matrix is its sign
    for l in 1..=6 {
        let v = immanant(&two_column(l, 0).unwrap(), &cycle_matrix(l), Cap::default()).unwrap();
        assert_eq!(v, if l % 2 == 1 { Rational::one() } else { -Rational::one() });
    }
}

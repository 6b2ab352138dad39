use fermionant::algebra::{frac, int, parse_rational, pow, Cap, Rational, RationalMatrix};
use fermionant::covers::*;
use fermionant::gadgets::{eliminate_weights, fermionant_by_contraction, gamma_of_weight};
use fermionant::interpolation::{vandermonde_eval, vandermonde_solve};
use fermionant::reductions::*;
use fermionant::young::*;
use num_bigint::BigInt;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-5i64..=5, 1i64..=4).prop_map(|(p, q)| frac(p, q))
}

fn matrix(max: usize) -> impl Strategy<Value = RationalMatrix> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(rational(), n * n)
            .prop_map(move |v| RationalMatrix::from_rows(v.chunks(n).map(<[_]>::to_vec).collect()).unwrap())
    })
}

fn square(n: usize) -> impl Strategy<Value = RationalMatrix> {
    prop::collection::vec(rational(), n * n).prop_map(move |v| RationalMatrix::from_rows(v.chunks(n).map(<[_]>::to_vec).collect()).unwrap())
}

fn cap() -> Cap {
    Cap::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rational_text_round_trip(p in -1000i64..1000, q in 1i64..50) {
        let x = frac(p, q);
        prop_assert_eq!(parse_rational(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn specializations(a in matrix(5)) {
        prop_assert_eq!(fermionant(&a, &int(1), Convention::Signed, cap()).unwrap(), determinant_exact(&a));
        prop_assert_eq!(fermionant(&a, &int(-1), Convention::Plain, cap()).unwrap(), permanent_ryser(&a));
        prop_assert_eq!(fermionant(&a, &int(0), Convention::Plain, cap()).unwrap(), int(0));
    }

    #[test]
    fn conventions_differ_by_sign(a in matrix(4), k in rational()) {
        let p = fermionant(&a, &k, Convention::Plain, cap()).unwrap();
        let s = fermionant(&a, &k, Convention::Signed, cap()).unwrap();
        prop_assert_eq!(if a.n() % 2 == 0 { p } else { -p }, s);
    }

    #[test]
    fn transpose_keeps_cycle_counts(a in matrix(4), k in rational()) {
        prop_assert_eq!(
            fermionant(&a, &k, Convention::Plain, cap()).unwrap(),
            fermionant(&a.transpose(), &k, Convention::Plain, cap()).unwrap()
        );
    }

    #[test]
    fn evaluators_agree(a in matrix(5), k in rational()) {
        let g = WeightedDigraph::from_matrix(&a);
        let brute = fermionant(&a, &k, Convention::Plain, cap()).unwrap();
        prop_assert_eq!(fermionant_dp(&g, &k).unwrap(), brute.clone());
        prop_assert_eq!(fermionant_sparse(&g, &k), brute.clone());
        prop_assert_eq!(stratified_weights(&g, cap()).unwrap().evaluate(&k), brute);
        prop_assert_eq!(hamiltonian(&a), stratified_weights(&g, cap()).unwrap().hamiltonian());
    }

    #[test]
    fn strata_scale_with_the_weights(a in matrix(4), s in rational()) {
        let g = WeightedDigraph::from_matrix_with_zeros(&a);
        let base = stratified_weights(&g, cap()).unwrap();
        let scaled = stratified_weights(&g.scaled(&s), cap()).unwrap();
        let f = pow(&s, a.n() as i64);
        for m in 1..=a.n() {
            prop_assert_eq!(scaled.get(m), base.get(m) * &f);
        }
    }

    #[test]
    fn vandermonde_round_trip(c in prop::collection::vec(rational(), 1..5), k in prop::sample::select(vec![int(2), int(3), frac(1, 2), int(-2)])) {
        let nodes: Vec<Rational> = (1..=c.len()).map(|l| pow(&-k.clone(), l as i64)).collect();
        let v = vandermonde_eval(&nodes, &c);
        prop_assert_eq!(vandermonde_solve(&nodes, &v).unwrap(), c);
    }

    #[test]
    fn decomposition_identity(a in matrix(5), k in prop::sample::select(vec![int(2), int(3), frac(1, 2)])) {
        prop_assert!(verify_decomposition(&a, &k, cap()).unwrap().plain_holds);
    }

    #[test]
    fn character_ignores_cycle_order(rows in prop::sample::select(vec![vec![3, 2], vec![2, 2, 1], vec![4, 1], vec![3, 1, 1], vec![2, 1, 1, 1]]),
                                     order in Just(vec![2usize, 1, 1, 1]).prop_shuffle()) {
        let y = YoungDiagram::from_rows(&rows).unwrap();
        let mut sorted = order.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        prop_assert_eq!(character_by_cycle_sequence(&y, &order).unwrap(), character_by_cycle_sequence(&y, &sorted).unwrap());
    }

    #[test]
    fn strips_leave_diagrams(rows in prop::collection::vec(1usize..5, 1..5), size in 1usize..6) {
        let mut rows = rows;
        rows.sort_unstable_by(|a, b| b.cmp(a));
        let y = YoungDiagram::from_rows(&rows).unwrap();
        for h in skew_hooks(&y, size) {
            prop_assert_eq!(h.cells.len(), size);
            prop_assert_eq!(h.remainder.weight() + size, y.weight());
            let spanned: std::collections::BTreeSet<usize> = h.cells.iter().map(|c| c.0).collect();
            prop_assert_eq!(h.height + 1, spanned.len());
        }
    }

    #[test]
    fn padding_layout(a in matrix(4), l in 1usize..5) {
        let p = pad_with_cycle(&a, l).unwrap();
        let n = a.n();
        for i in 0..n + l {
            for j in 0..n + l {
                let v = p.composite.at(i, j).clone();
                let want = if i < n && j < n {
                    a.at(i, j).clone()
                } else if i >= n && j >= n && j - n == (i - n + 1) % l {
                    int(1)
                } else {
                    int(0)
                };
                prop_assert_eq!(v, want);
            }
        }
    }

    #[test]
    fn padded_immanant_follows_the_strip_rule(a in square(3), k1 in 2usize..6, pad in 1usize..4) {
        prop_assume!(3 + pad >= k1);
        let k2 = 3 + pad - k1;
        prop_assume!(k2 <= k1);
        let y = two_column(k1, k2).unwrap();
        let sums = class_sums(&a, cap()).unwrap();
        let mut brute = BruteForceOracle { cap: cap() };
        let c = padded_expansion_identity(k1, k2, pad, &a, &mut brute, &sums).unwrap();
        prop_assert!(c.holds(), "{:?} {}", y, c.name);
    }

    #[test]
    fn branch_identity_holds(a in square(4)) {
        let mut o = ClassSumOracle::new(cap());
        prop_assert!(branch_identity(&a, 3, &mut o, cap()).unwrap().holds());
    }

    #[test]
    fn square_ledger_rebuilds_ferm2(a in square(4)) {
        let mut o = ClassSumOracle::new(cap());
        prop_assert_eq!(ferm2_via_square_immanants(&a, &mut o, cap()).unwrap(), fermionant(&a, &int(2), Convention::Plain, cap()).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn elimination_tracks_the_cycle_shift(a in 0i64..300, b in 0i64..4, k in prop::sample::select(vec![2i64, 3, -2])) {
        let mut g = WeightedDigraph::new(2);
        g.add_edge(1, 2, int(a)).unwrap();
        g.add_edge(2, 1, int(1)).unwrap();
        g.add_edge(1, 1, int(b)).unwrap();
        let k = int(k);
        let e = eliminate_weights(&g, &k, &BigInt::from(1000)).unwrap();
        prop_assert!(e.graph.edges().all(|(_, _, w)| *w == int(1)));
        let census: i64 = [a, b].iter().filter(|&&w| w > 1).map(|&w| gamma_of_weight(&BigInt::from(w), 1, 2)).sum();
        prop_assert_eq!(e.gamma, census);
        let want = pow(&-k.clone(), e.gamma) * fermionant_sparse(&g, &k);
        prop_assert_eq!(fermionant_by_contraction(&e.graph, &e.top_blocks(), &k).unwrap().0, want);
    }
}

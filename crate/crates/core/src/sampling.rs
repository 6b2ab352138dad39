//! Seeded random inputs shared by certifiers and verification suites.

use num_traits::Zero;
use rand::Rng;

use crate::algebra::{frac, Rational, RationalMatrix};
use crate::covers::WeightedDigraph;

/// Numerator in [−5, 5], denominator in 1..=4.
pub fn rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    frac(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

pub fn nonzero_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    loop {
        let q = rational(rng);
        if !q.is_zero() {
            return q;
        }
    }
}

pub fn matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> RationalMatrix {
    RationalMatrix::from_rows((0..n).map(|_| (0..n).map(|_| rational(rng)).collect()).collect())
        .expect("square by construction")
}

/// Each ordered pair (loops included) present with probability `density`, nonzero weights.
pub fn graph<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> WeightedDigraph {
    let mut g = WeightedDigraph::new(n);
    for u in 1..=n {
        for v in 1..=n {
            if rng.gen_bool(density) {
                g.add_edge(u, v, nonzero_rational(rng)).expect("fresh edge");
            }
        }
    }
    g
}

/// Complete digraph with loops on `n` vertices and random nonzero weights.
pub fn complete_graph<R: Rng + ?Sized>(rng: &mut R, n: usize) -> WeightedDigraph {
    graph(rng, n, 1.0)
}

/// Matrix with entries in {0, 1}.
pub fn zero_one_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> RationalMatrix {
    RationalMatrix::from_rows((0..n).map(|_| (0..n).map(|_| Rational::from_integer(rng.gen_range(0..=1).into())).collect()).collect())
        .expect("square by construction")
}

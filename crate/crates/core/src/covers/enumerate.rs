use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::WeightedDigraph;
use crate::algebra::{pow, Cap, Permutation, Rational};
use crate::Result;

/// A permutation all of whose edges `(i, π(i))` are present in the graph it came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleCover {
    pub permutation: Permutation,
}

impl CycleCover {
    pub fn cycle_count(&self) -> usize {
        self.permutation.cycle_count()
    }
}

/// Calls `f` on every cycle cover in lexicographic order of successor tables.
pub fn for_each_cover(g: &WeightedDigraph, cap: Cap, mut f: impl FnMut(&[usize])) -> Result<()> {
    let n = g.n();
    let succ: Vec<Vec<usize>> = (1..=n).map(|u| g.out_edges(u).map(|(v, _)| v - 1).collect()).collect();
    cap.check_branching(n, succ.iter().map(Vec::len), "cycle-cover enumeration")?;
    let mut used = vec![false; n];
    let mut cur = vec![0usize; n];
    fn rec(i: usize, succ: &[Vec<usize>], used: &mut [bool], cur: &mut [usize], f: &mut dyn FnMut(&[usize])) {
        if i == succ.len() {
            f(cur);
            return;
        }
        for &v in &succ[i] {
            if !used[v] {
                used[v] = true;
                cur[i] = v;
                rec(i + 1, succ, used, cur, f);
                used[v] = false;
            }
        }
    }
    rec(0, &succ, &mut used, &mut cur, &mut f);
    Ok(())
}

pub fn cycle_covers(g: &WeightedDigraph, cap: Cap) -> Result<Vec<CycleCover>> {
    let mut out = Vec::new();
    for_each_cover(g, cap, |images| {
        out.push(CycleCover { permutation: Permutation::from_images0(images.to_vec()) });
    })?;
    Ok(out)
}

/// Product of the cover's edge weights. Panics if the cover uses an absent edge.
pub fn cover_weight(g: &WeightedDigraph, c: &CycleCover) -> Rational {
    let mut w = Rational::one();
    for (i, &j) in c.permutation.images0().iter().enumerate() {
        w *= g.weight(i + 1, j + 1).expect("cover uses an absent edge");
    }
    w
}

/// Total cover weight per cycle count, `c_m` for `m = 1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratifiedWeights {
    pub by_cycles: BTreeMap<usize, Rational>,
    pub n: usize,
}

impl StratifiedWeights {
    pub fn zero(n: usize) -> Self {
        StratifiedWeights { by_cycles: (1..=n).map(|m| (m, Rational::zero())).collect(), n }
    }

    pub fn get(&self, m: usize) -> Rational {
        self.by_cycles.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Σ_m (−k)^m c_m, the plain fermionant.
    pub fn evaluate(&self, k: &Rational) -> Rational {
        let mk = -k.clone();
        self.by_cycles.iter().map(|(&m, c)| c * pow(&mk, m as i64)).sum()
    }

    pub fn hamiltonian(&self) -> Rational {
        self.get(1)
    }
}

pub fn stratified_weights(g: &WeightedDigraph, cap: Cap) -> Result<StratifiedWeights> {
    let n = g.n();
    let mut out = StratifiedWeights::zero(n);
    let weights: Vec<Vec<Option<Rational>>> =
        (1..=n).map(|u| (1..=n).map(|v| g.weight(u, v).cloned()).collect()).collect();
    for_each_cover(g, cap, |images| {
        let mut w = Rational::one();
        for (i, &j) in images.iter().enumerate() {
            w *= weights[i][j].as_ref().unwrap();
        }
        let c = Permutation::from_images0(images.to_vec()).cycle_count();
        *out.by_cycles.get_mut(&c).unwrap() += w;
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{frac, int};

    fn graph(n: usize, edges: &[(usize, usize, i64)]) -> WeightedDigraph {
        let mut g = WeightedDigraph::new(n);
        for &(u, v, w) in edges {
            g.add_edge(u, v, int(w)).unwrap();
        }
        g
    }

    #[test]
    fn small_enumerations() {
        let full = graph(2, &[(1, 1, 1), (1, 2, 1), (2, 1, 1), (2, 2, 1)]);
        assert_eq!(cycle_covers(&full, Cap::default()).unwrap().len(), 2);
        let cross = graph(2, &[(1, 2, 1), (2, 1, 1)]);
        let covers = cycle_covers(&cross, Cap::default()).unwrap();
        assert_eq!(covers.len(), 1);
        assert_eq!(covers[0].cycle_count(), 1);
        assert!(cycle_covers(&WeightedDigraph::new(3), Cap::default()).unwrap().is_empty());
    }

    #[test]
    fn weights() {
        let mut g = WeightedDigraph::new(1);
        g.add_edge(1, 1, frac(5, 3)).unwrap();
        let c = &cycle_covers(&g, Cap::default()).unwrap()[0];
        assert_eq!(cover_weight(&g, c), frac(5, 3));
        let two = graph(2, &[(1, 2, 2), (2, 1, 3)]);
        let c = &cycle_covers(&two, Cap::default()).unwrap()[0];
        assert_eq!(cover_weight(&two, c), int(6));
    }

    #[test]
    fn strata_of_complete_three() {
        let mut g = WeightedDigraph::new(3);
        for u in 1..=3 {
            for v in 1..=3 {
                g.add_edge(u, v, int(1)).unwrap();
            }
        }
        let s = stratified_weights(&g, Cap::default()).unwrap();
        assert_eq!((s.get(1), s.get(2), s.get(3)), (int(2), int(3), int(1)));
        let no_ham = graph(2, &[(1, 1, 1), (2, 2, 1)]);
        assert!(stratified_weights(&no_ham, Cap::default()).unwrap().get(1).is_zero());
    }

    #[test]
    fn support_aware_cap() {
        // 12 vertices on a single directed cycle: one branch per vertex.
        let mut g = WeightedDigraph::new(12);
        for u in 1..=12 {
            g.add_edge(u, u % 12 + 1, int(1)).unwrap();
        }
        assert_eq!(cycle_covers(&g, Cap::default()).unwrap().len(), 1);
        let mut dense = WeightedDigraph::new(12);
        for u in 1..=12 {
            for v in 1..=12 {
                dense.add_edge(u, v, int(1)).unwrap();
            }
        }
        assert!(cycle_covers(&dense, Cap::default()).is_err());
    }
}

use num_traits::{One, Zero};

use super::iff::{insert_many_iff_tracked, replicate, TrackedGraph};
use super::wiring::GadgetWiring;
use crate::algebra::{pow, Cap, Rational};
use crate::covers::{cover_weight, cycle_covers, WeightedDigraph};
use crate::Result;

type Pair = ((usize, usize), (usize, usize));

/// Expected and observed sums over the extension covers that agree with one host cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverRow {
    /// 1-based images of the host cover.
    pub cover: Vec<usize>,
    pub expected: Rational,
    pub observed: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverCheck {
    pub description: String,
    pub rows: Vec<CoverRow>,
}

impl CoverCheck {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.expected == r.observed)
    }

    pub fn first_failure(&self) -> Option<&CoverRow> {
        self.rows.iter().find(|r| r.expected != r.observed)
    }
}

fn half(k: &Rational) -> Rational {
    (Rational::one() - k) / Rational::from_integer(2.into())
}

fn per_cover(
    host: &WeightedDigraph,
    t: &TrackedGraph,
    k: &Rational,
    cap: Cap,
    expected: impl Fn(&crate::covers::CycleCover) -> Rational,
) -> Result<Vec<CoverRow>> {
    let mut rows = Vec::new();
    for c in cycle_covers(host, cap)? {
        let observed = t.matching_sum(&c.permutation, k, cap)?;
        rows.push(CoverRow { cover: c.permutation.images0().iter().map(|x| x + 1).collect(), expected: expected(&c), observed });
    }
    Ok(rows)
}

/// Simultaneous insertion: a cover using exactly one edge of some pair contributes 0, otherwise
/// it is scaled by ((1−k)/2)^{d(π)} with d(π) the number of pairs it avoids entirely.
pub fn verify_multi_insertion(host: &WeightedDigraph, pairs: &[Pair], wiring: &GadgetWiring, cap: Cap) -> Result<CoverCheck> {
    let k = &wiring.k;
    let t = insert_many_iff_tracked(host, pairs, wiring)?;
    let mk = -k.clone();
    let rows = per_cover(host, &t, k, cap, |c| {
        let uses = |e: (usize, usize)| c.permutation.image(e.0) == e.1;
        let mut d = 0;
        for &(e, f) in pairs {
            match (uses(e), uses(f)) {
                (true, true) => {}
                (false, false) => d += 1,
                _ => return Rational::zero(),
            }
        }
        pow(&half(k), d) * pow(&mk, c.cycle_count() as i64) * cover_weight(host, c)
    })?;
    Ok(CoverCheck { description: format!("{} pair(s) on a {}-vertex host at k = {k}", pairs.len(), host.n()), rows })
}

/// Replication: covers of F^l agreeing with π on copy 1 sum to
/// ((1−k)/2)^{(|E|−n)(l−1)} (−k)^{l·c(π)} ω(π).
pub fn verify_replication(host: &WeightedDigraph, l: usize, wiring: &GadgetWiring, cap: Cap) -> Result<CoverCheck> {
    let k = &wiring.k;
    let t = replicate(host, l, wiring)?;
    let mk = -k.clone();
    let excess = host.edge_count() as i64 - host.n() as i64;
    let rows = per_cover(host, &t, k, cap, |c| {
        pow(&half(k), excess * (l as i64 - 1)) * pow(&mk, (l * c.cycle_count()) as i64) * cover_weight(host, c)
    })?;
    Ok(CoverCheck { description: format!("l = {l} on a {}-vertex host at k = {k}", host.n()), rows })
}

/// Every set of one or two disjoint edge pairs on `host`, unordered within and across pairs.
pub fn pair_sets(host: &WeightedDigraph, max_pairs: usize) -> Vec<Vec<Pair>> {
    let edges: Vec<(usize, usize)> = host.edges().map(|(u, v, _)| (u, v)).collect();
    let mut singles = Vec::new();
    for (i, &e) in edges.iter().enumerate() {
        for &f in &edges[i + 1..] {
            singles.push((e, f));
        }
    }
    let mut out: Vec<Vec<Pair>> = singles.iter().map(|&p| vec![p]).collect();
    if max_pairs >= 2 {
        for (i, &(a, b)) in singles.iter().enumerate() {
            for &(c, d) in &singles[i + 1..] {
                if ![c, d].iter().any(|x| *x == a || *x == b) {
                    out.push(vec![(a, b), (c, d)]);
                }
            }
        }
    }
    out
}

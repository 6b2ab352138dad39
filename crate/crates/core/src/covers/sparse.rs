//! Transfer-matrix evaluation of the plain fermionant for large sparse graphs.
//!
//! Vertices are processed in a fixed order, each choosing its successor. A state records the
//! partial paths that are still open as pairs `(start, end)`: `start` is a processed vertex with no
//! predecessor yet, `end` is an unprocessed vertex already chosen as somebody's successor.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use num_traits::{One, Zero};

use super::WeightedDigraph;
use crate::algebra::Rational;

type State = Vec<(u32, u32)>;

/// Processing order: repeatedly take the unprocessed vertex with the most processed neighbours.
pub fn greedy_order(g: &WeightedDigraph) -> Vec<usize> {
    let n = g.n();
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (u, v, w) in g.edges() {
        if u != v && !w.is_zero() {
            nbrs[u - 1].push(v - 1);
            nbrs[v - 1].push(u - 1);
        }
    }
    for l in &mut nbrs {
        l.sort_unstable();
        l.dedup();
    }
    let mut score = vec![0usize; n];
    let mut done = vec![false; n];
    let mut heap: BinaryHeap<(usize, Reverse<usize>)> = BinaryHeap::new();
    let mut order = Vec::with_capacity(n);
    let mut next_fresh = 0;
    while order.len() < n {
        let v = loop {
            match heap.pop() {
                Some((s, Reverse(v))) if !done[v] && s == score[v] => break v,
                Some(_) => continue,
                None => {
                    while done[next_fresh] {
                        next_fresh += 1;
                    }
                    break next_fresh;
                }
            }
        };
        done[v] = true;
        order.push(v + 1);
        for &t in &nbrs[v] {
            if !done[t] {
                score[t] += 1;
                heap.push((score[t], Reverse(t)));
            }
        }
    }
    order
}

pub fn fermionant_sparse(g: &WeightedDigraph, k: &Rational) -> Rational {
    fermionant_sparse_with_order(g, k, &greedy_order(g))
}

/// `order` lists every vertex (1-based) exactly once.
pub fn fermionant_sparse_with_order(g: &WeightedDigraph, k: &Rational, order: &[usize]) -> Rational {
    let n = g.n();
    assert_eq!(order.len(), n, "order must list every vertex");
    if n == 0 {
        return Rational::one();
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        assert!(pos[v - 1] == usize::MAX, "vertex {v} repeated in order");
        pos[v - 1] = i;
    }
    let mut out: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
    let mut last_in: Vec<Option<usize>> = vec![None; n];
    for (u, v, w) in g.edges() {
        if w.is_zero() {
            continue;
        }
        out[u - 1].push((v - 1, w.clone()));
        let p = pos[u - 1];
        last_in[v - 1] = Some(last_in[v - 1].map_or(p, |q: usize| q.max(p)));
    }
    let mut settle_at: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        match last_in[v] {
            Some(p) => settle_at[p].push(v),
            None => return Rational::zero(),
        }
        if out[v].is_empty() {
            return Rational::zero();
        }
    }
    let mk = -k.clone();
    let mut states: HashMap<State, Rational> = HashMap::new();
    states.insert(Vec::new(), Rational::one());
    for (step, &xv) in order.iter().enumerate() {
        let x = xv - 1;
        let mut next: HashMap<State, Rational> = HashMap::with_capacity(states.len() * 2);
        for (state, val) in &states {
            let claimed = state.iter().position(|&(_, t)| t as usize == x);
            for (y, w) in &out[x] {
                let y = *y;
                let mut ns: State;
                let mut closes = false;
                if y == x {
                    if claimed.is_some() {
                        continue;
                    }
                    ns = state.clone();
                    closes = true;
                } else if pos[y] < step {
                    let Some(q) = state.iter().position(|&(s, _)| s as usize == y) else { continue };
                    ns = state.clone();
                    match claimed {
                        Some(p) if p == q => {
                            ns.remove(p);
                            closes = true;
                        }
                        Some(p) => {
                            let joined = (state[p].0, state[q].1);
                            ns.retain(|&pr| pr != state[p] && pr != state[q]);
                            ns.push(joined);
                        }
                        None => ns[q].0 = x as u32,
                    }
                } else {
                    if state.iter().any(|&(_, t)| t as usize == y) {
                        continue;
                    }
                    ns = state.clone();
                    match claimed {
                        Some(p) => ns[p].1 = y as u32,
                        None => ns.push((x as u32, y as u32)),
                    }
                }
                if claimed.is_none() && !closes {
                    // x starts an open path and still needs a predecessor later on.
                    if last_in[x].is_none_or(|p| p <= step) {
                        continue;
                    }
                }
                if !settled(&ns, &settle_at[step], &pos, step) {
                    continue;
                }
                ns.sort_unstable();
                let mut contrib = val * w;
                if closes {
                    contrib *= &mk;
                }
                *next.entry(ns).or_insert_with(Rational::zero) += contrib;
            }
        }
        next.retain(|_, v| !v.is_zero());
        states = next;
        if states.is_empty() {
            return Rational::zero();
        }
    }
    states.remove(&Vec::new()).unwrap_or_else(Rational::zero)
}

/// Vertices whose last possible predecessor has just been processed must already have one.
fn settled(state: &State, settle: &[usize], pos: &[usize], step: usize) -> bool {
    settle.iter().all(|&v| {
        let is_start = state.iter().any(|&(s, _)| s as usize == v);
        if is_start {
            return false;
        }
        pos[v] <= step || state.iter().any(|&(_, t)| t as usize == v)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{frac, int, Cap};
    use crate::covers::{fermionant, Convention};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> WeightedDigraph {
        let mut g = WeightedDigraph::new(n);
        for u in 1..=n {
            for v in 1..=n {
                if rng.gen_bool(density) {
                    g.add_edge(u, v, frac(rng.gen_range(-4..=4), rng.gen_range(1..=3))).unwrap();
                }
            }
        }
        g
    }

    #[test]
    fn matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=6 {
            for _ in 0..30 {
                let g = random_graph(&mut rng, n, 0.6);
                let k = frac(rng.gen_range(-5..=5), rng.gen_range(1..=3));
                let want = fermionant(&g.adjacency_matrix(), &k, Convention::Plain, Cap::default()).unwrap();
                assert_eq!(fermionant_sparse(&g, &k), want);
                let rev: Vec<usize> = (1..=n).rev().collect();
                assert_eq!(fermionant_sparse_with_order(&g, &k, &rev), want);
            }
        }
    }

    #[test]
    fn long_cycle() {
        let n = 40;
        let mut g = WeightedDigraph::new(n);
        for u in 1..=n {
            g.add_edge(u, u % n + 1, int(2)).unwrap();
        }
        let expected = -int(3) * crate::algebra::pow(&int(2), n as i64);
        assert_eq!(fermionant_sparse(&g, &int(3)), expected);
    }

    #[test]
    fn order_is_a_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = random_graph(&mut rng, 9, 0.2);
        let mut o = greedy_order(&g);
        o.sort_unstable();
        assert_eq!(o, (1..=9).collect::<Vec<_>>());
    }
}

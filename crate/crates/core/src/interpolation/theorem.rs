use num_traits::{One, Zero};

use super::vandermonde::{vandermonde_inverse_row, vandermonde_solve};
use crate::algebra::{frac, pow, RationalMatrix, Rational};
use crate::covers::{fermionant_sparse, StratifiedWeights, WeightedDigraph};
use crate::gadgets::{replicate, search_iff_wiring, GadgetWiring};
use crate::{Error, Result};

/// Nodes and scale factors of the replication system for one host graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpolationPlan {
    pub k: Rational,
    pub n: usize,
    /// Edges with nonzero weight; zero-weight edges are pruned before replication.
    pub edges: usize,
    /// (−k)^l for l = 1..=n.
    pub nodes: Vec<Rational>,
    /// ((1−k)/2)^{|E|−n}; copy l contributes α^{l−1}.
    pub alpha: Rational,
}

pub(crate) fn check_k(k: &Rational) -> Result<()> {
    if k.is_zero() {
        return Err(Error::InvalidParameter("k = 0 makes every fermionant vanish".into()));
    }
    if k.is_one() {
        return Err(Error::DegenerateNodes("at k = 1 the nodes (-k)^l alternate between -1 and 1 and repeat".into()));
    }
    if *k == -Rational::one() {
        return Err(Error::DegenerateNodes(
            "at k = -1 every node (-k)^l equals 1; the fermionant is the permanent there, use the permanent identity instead".into(),
        ));
    }
    Ok(())
}

/// Copy of g without zero-weight edges.
pub fn prune_zero_edges(g: &WeightedDigraph) -> WeightedDigraph {
    let mut h = WeightedDigraph::new(g.n());
    for (u, v, w) in g.edges() {
        if !w.is_zero() {
            h.add_edge(u, v, w.clone()).unwrap();
        }
    }
    h
}

impl InterpolationPlan {
    pub fn new(g: &WeightedDigraph, k: &Rational) -> Result<Self> {
        check_k(k)?;
        let n = g.n();
        let edges = g.edges().filter(|(_, _, w)| !w.is_zero()).count();
        let mk = -k.clone();
        let half = (Rational::one() - k) * frac(1, 2);
        Ok(InterpolationPlan {
            k: k.clone(),
            n,
            edges,
            nodes: (1..=n).map(|l| pow(&mk, l as i64)).collect(),
            alpha: pow(&half, edges as i64 - n as i64),
        })
    }

    /// α^{l−1}.
    pub fn scale(&self, l: usize) -> Rational {
        pow(&self.alpha, l as i64 - 1)
    }

    /// Weights w*_l with c_m = Σ_l w*_l · Ferm(P_l G).
    pub fn weights_for(&self, m: usize) -> Result<Vec<Rational>> {
        let row = vandermonde_inverse_row(&self.nodes, m)?;
        Ok(row.into_iter().enumerate().map(|(i, w)| w / self.scale(i + 1)).collect())
    }
}

/// Everything computed on the way to the strata.
#[derive(Clone, Debug)]
pub struct Recovery {
    pub plan: InterpolationPlan,
    /// Vertex count of P_l G.
    pub sizes: Vec<usize>,
    /// Plain fermionant of P_l G.
    pub values: Vec<Rational>,
    pub strata: StratifiedWeights,
}

fn check_wiring(wiring: &GadgetWiring, k: &Rational) -> Result<()> {
    if &wiring.k != k {
        return Err(Error::InvalidParameter(format!("wiring was certified for k = {}, not {k}", wiring.k)));
    }
    Ok(())
}

pub fn recover_stratified_report(g: &WeightedDigraph, k: &Rational, wiring: &GadgetWiring) -> Result<Recovery> {
    let plan = InterpolationPlan::new(g, k)?;
    check_wiring(wiring, k)?;
    let host = prune_zero_edges(g);
    let mut sizes = Vec::new();
    let mut values = Vec::new();
    let mut scaled = Vec::new();
    for l in 1..=plan.n {
        let p = replicate(&host, l, wiring)?;
        let f = fermionant_sparse(&p.graph, k);
        sizes.push(p.graph.n());
        scaled.push(&f / plan.scale(l));
        values.push(f);
    }
    let c = vandermonde_solve(&plan.nodes, &scaled)?;
    let strata = StratifiedWeights { by_cycles: c.into_iter().enumerate().map(|(i, x)| (i + 1, x)).collect(), n: plan.n };
    Ok(Recovery { plan, sizes, values, strata })
}

/// c_m for m = 1..=n from fermionant values of the replicated graphs P_l G, l = 1..=n.
pub fn recover_stratified(g: &WeightedDigraph, k: &Rational, wiring: &GadgetWiring) -> Result<StratifiedWeights> {
    Ok(recover_stratified_report(g, k, wiring)?.strata)
}

/// The Hamiltonian of A recovered as c_1 of its graph.
pub fn hamiltonian_via_fermionant(a: &RationalMatrix, k: &Rational, wiring: &GadgetWiring) -> Result<Rational> {
    Ok(recover_stratified(&WeightedDigraph::from_matrix(a), k, wiring)?.hamiltonian())
}

/// Same, searching (or reusing) the certified iff wiring for k.
pub fn hamiltonian_via_fermionant_auto(a: &RationalMatrix, k: &Rational) -> Result<Rational> {
    check_k(k)?;
    hamiltonian_via_fermionant(a, k, &search_iff_wiring(k)?)
}

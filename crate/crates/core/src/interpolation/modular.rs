use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::theorem::{check_k, InterpolationPlan};
use crate::algebra::{factorial, is_integer, pow, RationalMatrix, Rational};
use crate::covers::{fermionant_sparse, hamiltonian, WeightedDigraph};
use crate::gadgets::{
    certified_delta, eliminate_weights, fermionant_by_contraction, gamma_of_weight, printed_gamma_of_weight, replicate,
    search_iff_wiring, GadgetKind,
};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct ModularOptions {
    /// Λ; defaults to the smallest integer above the bound.
    pub modulus: Option<BigInt>,
    /// Refuse when the {0,1} graphs would exceed this many vertices in total.
    pub max_vertices: usize,
}

impl Default for ModularOptions {
    fn default() -> Self {
        ModularOptions { modulus: None, max_vertices: 2_000_000 }
    }
}

/// One row l of the ledger.
#[derive(Clone, Debug)]
pub struct LedgerEntry {
    pub l: usize,
    /// n_l, vertices of P_l A.
    pub size: usize,
    pub w_star: Rational,
    /// ω · w*_l.
    pub w_check: BigInt,
    /// n_n − n_l.
    pub m: usize,
    /// Negative entries of the scaled graph that went through the modulus.
    pub negatives: usize,
    /// Vertices of the {0,1} graph.
    pub eliminated_size: usize,
    pub gamma: i64,
    /// Ferm(P_l A).
    pub ferm: Rational,
    /// Ferm of the {0,1} graph, reduced mod Λ.
    pub ferm_final_mod: BigInt,
}

#[derive(Clone, Debug)]
pub struct ModularPlan {
    pub k: BigInt,
    /// The integer scaling 2k.
    pub scale: BigInt,
    pub host_edges: usize,
    pub bound: BigInt,
    pub modulus: BigInt,
    pub omega: BigInt,
    /// max_l γ_l.
    pub gamma: i64,
    pub ledger: Vec<LedgerEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct ModularReport {
    pub plan: ModularPlan,
    pub stages: Vec<Stage>,
    pub hamiltonian: BigInt,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl ModularReport {
    pub fn holds(&self) -> bool {
        self.stages.iter().all(|s| s.passed)
    }

    pub fn first_failure(&self) -> Option<&Stage> {
        self.stages.iter().find(|s| !s.passed)
    }
}

/// Vertices that M(a) adds: 6i − 2 per set bit i ≥ 1.
fn block_vertices(a: &BigInt) -> usize {
    (1..a.bits()).filter(|&i| a.bit(i)).map(|i| 6 * i as usize - 2).sum()
}

fn to_int(q: &Rational, what: &str) -> Result<BigInt> {
    if !is_integer(q) {
        return Err(Error::StageFailed { stage: what.into(), detail: format!("{q} is not an integer") });
    }
    Ok(q.to_integer())
}

/// Runs the chain Ham(A) → fermionants of P_l A → integer weights → weights mod Λ → {0,1} graphs,
/// checking every intermediate identity, and finally the congruence
/// Ham(A)·(2k)^{n_n}·(−k)^γ·ω ≡ Σ_l ω̌_l (2k)^{m_l} (−k)^{γ−γ_l} Ferm(P'''_l A)  (mod Λ).
pub fn modular_pipeline(a: &RationalMatrix, k: &Rational, opts: &ModularOptions) -> Result<ModularReport> {
    let n = a.n();
    for i in 0..n {
        for j in 0..n {
            let x = a.at(i, j);
            if !x.is_zero() && !x.is_one() {
                return Err(Error::InvalidParameter(format!("entry ({},{}) = {x}; the chain starts from a {{0,1}} matrix", i + 1, j + 1)));
            }
        }
    }
    if !is_integer(k) {
        return Err(Error::InvalidParameter(format!("k must be an integer, got {k}")));
    }
    check_k(k)?;
    let kk = k.to_integer();
    let mk = -k.clone();
    let s: BigInt = &kk * 2;
    let sq = Rational::from_integer(s.clone());
    let g = WeightedDigraph::from_matrix(a);
    let plan = InterpolationPlan::new(&g, k)?;
    let wiring = search_iff_wiring(k)?;
    let ham = to_int(&hamiltonian(a), "hamiltonian")?;
    let mut stages = Vec::new();

    let mut graphs = Vec::new();
    let mut f = Vec::new();
    for l in 1..=n {
        let p = replicate(&g, l, &wiring)?.graph;
        f.push(fermionant_sparse(&p, k));
        graphs.push(p);
    }
    let sizes: Vec<usize> = graphs.iter().map(WeightedDigraph::n).collect();
    let w = plan.weights_for(1)?;
    let combined: Rational = w.iter().zip(&f).map(|(x, y)| x * y).sum();
    stages.push(Stage {
        name: "interpolation",
        passed: combined == Rational::from_integer(ham.clone()),
        detail: format!("Σ w*_l Ferm(P_l A) = {combined}, Ham(A) = {ham}, |E| = {}", plan.edges),
    });

    // P'_l: every weight times 2k
    let mut scaled = Vec::new();
    let mut ok = true;
    for (l, p) in graphs.iter().enumerate() {
        let q = p.scaled(&sq);
        if q.edges().any(|(_, _, x)| !is_integer(x)) {
            return Err(Error::StageFailed { stage: "integer scaling".into(), detail: format!("P_{} still has fractional weights", l + 1) });
        }
        ok &= fermionant_sparse(&q, k) == pow(&sq, sizes[l] as i64) * &f[l];
        scaled.push(q);
    }
    stages.push(Stage { name: "integer scaling", passed: ok, detail: format!("Ferm(P'_l A) = (2k)^(n_l) Ferm(P_l A) for n_l = {sizes:?}") });

    let mut bound = Rational::zero();
    for (l, x) in w.iter().enumerate() {
        bound += x.abs() * Rational::from_integer(factorial(sizes[l]) * s.abs().pow(2 * sizes[l] as u32));
    }
    let bound = bound.ceil().to_integer();
    let modulus = opts.modulus.clone().unwrap_or_else(|| &bound + 1);
    if modulus <= bound {
        return Err(Error::InvalidParameter(format!("modulus {modulus} is not above the bound {bound}")));
    }
    stages.push(Stage { name: "modulus bound", passed: true, detail: format!("Λ = {modulus} > {bound}") });

    // P''_l: −m becomes Λ − m
    let mut mapped = Vec::new();
    let mut negatives = Vec::new();
    let mut ok = true;
    let mut estimate = 0usize;
    for (l, q) in scaled.iter().enumerate() {
        let mut r = WeightedDigraph::new(q.n());
        let mut neg = 0;
        for (u, v, x) in q.edges() {
            let mut z = x.to_integer();
            if z.is_negative() {
                z += &modulus;
                neg += 1;
            }
            estimate += block_vertices(&z);
            r.add_edge(u, v, Rational::from_integer(z))?;
        }
        let lhs = fermionant_sparse(&r, k).to_integer();
        let rhs = fermionant_sparse(q, k).to_integer();
        ok &= (lhs - rhs).mod_floor(&modulus).is_zero();
        negatives.push(neg);
        mapped.push(r);
        let _ = l;
    }
    stages.push(Stage { name: "negative map", passed: ok, detail: format!("Ferm(P''_l A) ≡ Ferm(P'_l A) mod Λ, negatives mapped: {negatives:?}") });
    if estimate > opts.max_vertices {
        return Err(Error::EnumerationTooLarge { what: format!("{{0,1}} graphs with about {estimate} vertices"), cap: opts.max_vertices });
    }

    let dl = certified_delta(GadgetKind::Loop, k)?;
    let dd = certified_delta(GadgetKind::Diamond, k)?;
    let mut finals = Vec::new();
    let mut gammas = Vec::new();
    let mut elim_sizes = Vec::new();
    let mut ok = true;
    let mut notes = Vec::new();
    for (l, r) in mapped.iter().enumerate() {
        let el = eliminate_weights(r, k, &modulus)?;
        let zero_one = el.graph.edges().all(|(_, _, x)| x.is_zero() || x.is_one());
        let census: i64 = el.blocks.iter().map(|b| gamma_of_weight(&b.weight, dl, dd)).sum();
        let printed: i64 = el.blocks.iter().map(|b| printed_gamma_of_weight(&b.weight)).sum();
        let (value, sums) = fermionant_by_contraction(&el.graph, &el.top_blocks(), k)?;
        let expect = pow(&mk, el.gamma) * fermionant_sparse(r, k);
        let blocks_ok = el
            .blocks
            .iter()
            .filter(|b| !b.block.internals.is_empty())
            .zip(&sums)
            .all(|(b, s)| s.weight == Rational::from_integer(&b.weight - (&b.weight & BigInt::one())));
        let direct_ok = el.graph.n() > 200 || fermionant_sparse(&el.graph, k) == value;
        let row_ok = zero_one && census == el.gamma && value == expect && blocks_ok && direct_ok;
        ok &= row_ok;
        notes.push(format!(
            "l={}: {} vertices, γ_l = {} (census {census}, printed count {printed}), blocks {}",
            l + 1,
            el.graph.n(),
            el.gamma,
            el.blocks.len()
        ));
        gammas.push(el.gamma);
        elim_sizes.push(el.graph.n());
        finals.push(value.to_integer());
    }
    stages.push(Stage { name: "weight elimination", passed: ok, detail: notes.join("; ") });

    let gamma = *gammas.iter().max().unwrap();
    let omega: BigInt = w.iter().map(|x| x.denom().clone()).product();
    let nn = *sizes.last().unwrap();
    let kpow = |e: i64| -> BigInt { pow(&mk, e).to_integer().mod_floor(&modulus) };
    let spow = |e: usize| -> BigInt { s.modpow(&BigInt::from(e), &modulus) };
    let lhs = (&ham * spow(nn) * kpow(gamma) * &omega).mod_floor(&modulus);
    let mut rhs = BigInt::zero();
    let mut ledger = Vec::new();
    for l in 0..n {
        let w_check = to_int(&(&w[l] * Rational::from_integer(omega.clone())), "ledger")?;
        let m = nn - sizes[l];
        let fm = finals[l].mod_floor(&modulus);
        rhs += &w_check * spow(m) * kpow(gamma - gammas[l]) * &fm;
        ledger.push(LedgerEntry {
            l: l + 1,
            size: sizes[l],
            w_star: w[l].clone(),
            w_check,
            m,
            negatives: negatives[l],
            eliminated_size: elim_sizes[l],
            gamma: gammas[l],
            ferm: f[l].clone(),
            ferm_final_mod: fm,
        });
    }
    let rhs = rhs.mod_floor(&modulus);
    stages.push(Stage { name: "congruence", passed: lhs == rhs, detail: format!("lhs ≡ {lhs}, rhs ≡ {rhs} mod Λ") });

    Ok(ModularReport {
        plan: ModularPlan { k: kk, scale: s, host_edges: plan.edges, bound, modulus, omega, gamma, ledger },
        stages,
        hamiltonian: ham,
        lhs,
        rhs,
    })
}

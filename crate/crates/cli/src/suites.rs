use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fermionant::algebra::{factorial, frac, int, pow, Cap, Partition, Rational, RationalMatrix};
use fermionant::covers::{
    determinant_exact, fermionant, fermionant_dp, fermionant_sparse, hamiltonian, permanent_ryser, stratified_weights, Convention,
    WeightedDigraph,
};
use fermionant::gadgets::{
    certified_delta, eliminate_weights, fermionant_by_contraction, gamma_of_weight, pair_sets, search_iff_certificate, verify_multi_insertion,
    verify_replication, GadgetKind,
};
use fermionant::interpolation::{hamiltonian_via_fermionant, hamiltonian_via_fermionant_auto, modular_pipeline, recover_stratified, ModularOptions};
use fermionant::reductions::{square_report, family_pipeline, two_column_identities, verify_constant_delta, FamilySpec, StepStatus};
use fermionant::sampling;
use fermionant::young::{
    content_product_coeff, decomposition_coeffs, diagrams_with_max_columns, immanant, mn_character, verify_decomposition, YoungDiagram,
};
use fermionant::{Error, Result};

use crate::report::{inline_graph, inline_matrix, Check, Section};

pub const SUITES: &[&str] = &["basics", "iff", "lemma1", "lemma2", "thm1", "lemma3", "prop4", "appendix-b", "appendix-c"];

#[derive(Clone, Debug)]
pub struct SuiteOpts {
    pub seed: u64,
    pub cap: Cap,
    pub n: Option<usize>,
    pub ks: Vec<Rational>,
    pub trials: Option<usize>,
    pub k1: Option<usize>,
    pub k2: Option<usize>,
}

impl SuiteOpts {
    fn ks_or(&self, default: &[Rational]) -> Vec<Rational> {
        if self.ks.is_empty() { default.to_vec() } else { self.ks.clone() }
    }

    fn sizes_or(&self, default: impl IntoIterator<Item = usize>) -> Vec<usize> {
        match self.n {
            Some(n) => vec![n],
            None => default.into_iter().collect(),
        }
    }

    fn trials_or(&self, t: usize) -> usize {
        self.trials.unwrap_or(t)
    }
}

pub fn default_ks() -> Vec<Rational> {
    vec![int(2), int(3), int(-2), frac(1, 2)]
}

/// Each suite draws from its own stream, so a suite run alone sees the same inputs as under `all`.
pub fn suite_rng(seed: u64, name: &str) -> ChaCha8Rng {
    let idx = SUITES.iter().position(|s| *s == name).unwrap_or(SUITES.len()) as u64;
    ChaCha8Rng::seed_from_u64(seed ^ (idx + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn run_suite(name: &str, opts: &SuiteOpts) -> Result<Section> {
    let mut rng = suite_rng(opts.seed, name);
    let mut s = Section::new(name);
    let r = match name {
        "basics" => basics(&mut s, opts, &mut rng),
        "iff" => iff(&mut s, opts),
        "lemma1" => lemma1(&mut s, opts, &mut rng),
        "lemma2" => lemma2(&mut s, opts, &mut rng),
        "thm1" => thm1(&mut s, opts, &mut rng),
        "lemma3" => lemma3(&mut s, opts, &mut rng),
        "prop4" => prop4(&mut s, opts, &mut rng),
        "appendix-b" => appendix_b(&mut s, opts),
        "appendix-c" => appendix_c(&mut s, opts, &mut rng),
        other => return Err(Error::InvalidParameter(format!("unknown suite `{other}` (expected one of {}, all)", SUITES.join(", ")))),
    };
    if let Err(e) = r {
        s.push(Check::failed("suite aborted", e.to_string(), format!("verify {name} --seed {}", opts.seed)));
    }
    Ok(s)
}

/// First input on which `ok` fails, or None.
fn first_failure<T>(inputs: &[T], mut ok: impl FnMut(&T) -> Result<bool>) -> Result<Option<&T>> {
    for x in inputs {
        if !ok(x)? {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

fn matrix_check(name: String, inputs: &[RationalMatrix], extra: &str, ok: impl FnMut(&RationalMatrix) -> Result<bool>) -> Result<Check> {
    Ok(match first_failure(inputs, ok)? {
        None => Check::new(name, true, format!("{} matrices", inputs.len())),
        Some(a) => Check::failed(name, "mismatch".to_string(), format!("matrix=[{}]{extra}", inline_matrix(a))),
    })
}

fn basics(s: &mut Section, o: &SuiteOpts, rng: &mut ChaCha8Rng) -> Result<()> {
    let cap = o.cap;
    let mats: Vec<RationalMatrix> = (0..o.trials_or(200)).map(|i| sampling::matrix(rng, 1 + i % 6)).collect();
    s.push(matrix_check("signed Ferm_1 = det".into(), &mats, "", |a| {
        Ok(fermionant(a, &int(1), Convention::Signed, cap)? == determinant_exact(a))
    })?);
    s.push(matrix_check("plain Ferm_-1 = per".into(), &mats, "", |a| Ok(fermionant(a, &int(-1), Convention::Plain, cap)? == permanent_ryser(a)))?);
    s.push(matrix_check("Ferm_0 = 0".into(), &mats, "", |a| Ok(fermionant(a, &int(0), Convention::Plain, cap)?.is_zero()))?);

    let brute_cap = Cap(cap.0.max(7));
    for n in o.sizes_or(1..=7) {
        let mut bad = None;
        let graphs = 50;
        for _ in 0..graphs {
            let g = sampling::graph(rng, n, 0.6);
            let k = sampling::rational(rng);
            if fermionant_dp(&g, &k)? != fermionant(&g.adjacency_matrix(), &k, Convention::Plain, brute_cap)? {
                bad = Some(format!("graph=[{}] k={k}", inline_graph(&g)));
                break;
            }
        }
        let name = format!("bitmask DP = permutation sum, n={n}");
        s.push(match bad {
            None => Check::new(name, true, format!("{graphs} graphs")),
            Some(w) => Check::failed(name, "mismatch", w),
        });
    }

    for n in 1..=6 {
        let classes = Partition::all(n);
        let diagrams: Vec<YoungDiagram> = Partition::all(n).into_iter().map(YoungDiagram::new).collect();
        let fact = factorial(n);
        let mut ok = true;
        for (i, a) in diagrams.iter().enumerate() {
            for b in &diagrams[i..] {
                let mut acc = BigInt::zero();
                for t in &classes {
                    acc += t.class_size() * mn_character(a, t)? * mn_character(b, t)?;
                }
                ok &= acc == if a == b { fact.clone() } else { BigInt::zero() };
            }
        }
        s.push(Check::new(format!("character orthogonality n={n}"), ok, format!("{} diagrams", diagrams.len())));
        let row = YoungDiagram::from_rows(&[n])?;
        let col = YoungDiagram::from_columns(&[n])?;
        let mut spec_ok = true;
        for t in &classes {
            let sign = if (n - t.len()) % 2 == 0 { 1 } else { -1 };
            spec_ok &= mn_character(&row, t)? == 1 && mn_character(&col, t)? == sign;
        }
        let a = sampling::matrix(rng, n);
        let imm_ok = immanant(&row, &a, cap)? == permanent_ryser(&a) && immanant(&col, &a, cap)? == determinant_exact(&a);
        s.push(
            Check::new(format!("row/column characters n={n}"), spec_ok && imm_ok, "trivial and sign characters; per and det immanants")
                .witness(|| format!("matrix=[{}]", inline_matrix(&a))),
        );
    }
    Ok(())
}

fn iff(s: &mut Section, o: &SuiteOpts) -> Result<()> {
    for k in o.ks_or(&default_ks()) {
        let name = format!("iff gadget k={k}");
        match search_iff_certificate(&k) {
            Ok(cert) => {
                let neither = cert.contract.case(&[false, false]).map(|c| c.factor.clone()).unwrap_or_default();
                s.push(Check::new(
                    name,
                    cert.is_complete(),
                    format!("{} rows, tier {:?}, variant {}, neither factor {neither}", cert.rows.len(), cert.wiring.tier, cert.wiring.variant),
                ));
            }
            Err(Error::SearchExhausted { reason, partial }) => {
                let bad = partial.rows.iter().filter(|r| r.expected != r.observed).count();
                s.push(Check::failed(name, format!("{reason}; best partial fails {bad} rows"), format!("gadget search --kind iff --k {k}")));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

fn lemma1(s: &mut Section, o: &SuiteOpts, rng: &mut ChaCha8Rng) -> Result<()> {
    for k in o.ks_or(&default_ks()) {
        let w = search_iff_certificate(&k)?.wiring;
        for n in o.sizes_or(2..=3) {
            let host = sampling::complete_graph(rng, n);
            let sets = pair_sets(&host, 2);
            let mut rows = 0;
            let mut bad = None;
            for set in &sets {
                let c = verify_multi_insertion(&host, set, &w, o.cap)?;
                rows += c.rows.len();
                if let Some(r) = c.first_failure() {
                    bad = Some(format!("graph=[{}] pairs={set:?} cover={:?} expected={} observed={}", inline_graph(&host), r.cover, r.expected, r.observed));
                    break;
                }
            }
            let name = format!("multi-insertion k={k} n={n}");
            s.push(match bad {
                None => Check::new(name, true, format!("{} pair sets, {rows} cover rows", sets.len())),
                Some(wit) => Check::failed(name, "cover sum off the contract", wit),
            });
        }
    }
    Ok(())
}

fn lemma2(s: &mut Section, o: &SuiteOpts, rng: &mut ChaCha8Rng) -> Result<()> {
    for k in o.ks_or(&default_ks()) {
        let w = search_iff_certificate(&k)?.wiring;
        for n in o.sizes_or(1..=3) {
            let host = sampling::complete_graph(rng, n);
            for l in [2, 3] {
                let c = verify_replication(&host, l, &w, o.cap)?;
                let name = format!("replication k={k} n={n} l={l}");
                s.push(match c.first_failure() {
                    None => Check::new(name, true, format!("{} covers", c.rows.len())),
                    Some(r) => Check::failed(
                        name,
                        "cover sum off the contract",
                        format!("graph=[{}] cover={:?} expected={} observed={}", inline_graph(&host), r.cover, r.expected, r.observed),
                    ),
                });
            }
        }
    }
    Ok(())
}

fn thm1(s: &mut Section, o: &SuiteOpts, rng: &mut ChaCha8Rng) -> Result<()> {
    let trials = o.trials_or(10);
    for k in o.ks_or(&default_ks()) {
        if k.is_one() || k == -Rational::one() || k.is_zero() {
            degenerate(s, &k);
            continue;
        }
        let w = search_iff_certificate(&k)?.wiring;
        for n in o.sizes_or(1..=3) {
            let mats: Vec<RationalMatrix> = (0..trials).map(|_| sampling::matrix(rng, n)).collect();
            s.push(matrix_check(format!("round trip k={k} n={n}"), &mats, &format!(" k={k}"), |a| {
                let g = WeightedDigraph::from_matrix(a);
                Ok(recover_stratified(&g, &k, &w)? == stratified_weights(&g, o.cap)? && hamiltonian_via_fermionant(a, &k, &w)? == hamiltonian(a))
            })?);
        }
    }
    if o.ks.is_empty() {
        degenerate(s, &int(1));
        degenerate(s, &int(-1));
    }
    Ok(())
}

fn degenerate(s: &mut Section, k: &Rational) {
    let a = RationalMatrix::from_i64(&[&[1, 2], &[3, 4]]).expect("square");
    let name = format!("k={k} is refused");
    s.push(match hamiltonian_via_fermionant_auto(&a, k) {
        Err(e @ (Error::DegenerateNodes(_) | Error::InvalidParameter(_))) => Check::new(name, true, e.to_string()),
        Err(e) => Check::failed(name, format!("unexpected error: {e}"), format!("reduce ham --k {k}")),
        Ok(v) => Check::failed(name, format!("returned {v}"), format!("reduce ham --k {k}")),
    });
}

fn lemma3(s: &mut Section, o: &SuiteOpts, rng: &mut ChaCha8Rng) -> Result<()> {
    let trials = o.trials_or(50);
    for k in o.ks_or(&[int(2), int(3)]) {
        for n in o.sizes_or(1..=6) {
            let mats: Vec<RationalMatrix> = (0..trials).map(|_| sampling::matrix(rng, n)).collect();
            let mut signed = 0;
            s.push(matrix_check(format!("decomposition k={k} n={n}"), &mats, &format!(" k={k}"), |a| {
                let r = verify_decomposition(a, &k, o.cap)?;
                signed += r.signed_holds as usize;
                Ok(r.plain_holds)
            })?);
            s.note(format!("k={k} n={n}: signed convention matched on {signed} of {trials}"));
        }
    }
    let d = decomposition_coeffs(2, &int(2), o.cap)?;
    let (d2, d11) = (d.get(&YoungDiagram::from_rows(&[2])?), d.get(&YoungDiagram::from_rows(&[1, 1])?));
    s.push(Check::new("n=2 k=2 coefficients", d2 == int(1) && d11 == int(3), format!("d[2] = {d2}, d[1,1] = {d11}")));
    for k in [int(2), int(3), int(-1), frac(1, 2)] {
        let mut count = 0;
        let mut bad = None;
        for n in 1..=6 {
            let table = decomposition_coeffs(n, &k, o.cap)?;
            for y in diagrams_with_max_columns(n, n) {
                count += 1;
                if table.get(&y) != content_product_coeff(&y, &k) {
                    bad.get_or_insert(format!("diagram {y} k={k}"));
                }
            }
        }
        let name = format!("content product = projection k={k}");
        s.push(match bad {
            None => Check::new(name, true, format!("{count} diagrams")),
            Some(w) => Check::failed(name, "coefficient mismatch", w),
        });
    }
    Ok(())
}

fn prop4(s: &mut Section, o: &SuiteOpts, rng: &mut ChaCha8Rng) -> Result<()> {
    let trials = o.trials_or(20);
    for n in o.sizes_or([4, 6]) {
        let r = square_report(n, trials, rng, o.cap)?;
        let alt = r.branches.iter().filter(|b| b.alt_holds()).count();
        s.push(Check::new(
            format!("branch identity n={n}"),
            r.branches_hold(),
            format!("{} instances; with signs (-1)^(l-1), (-1)^l only {alt} hold", r.branches.len()),
        ));
        let bad = r.pipeline.iter().position(|(x, y)| x != y);
        s.push(Check::new(format!("Ferm_2 from square immanants n={n}"), bad.is_none(), format!("{trials} matrices")));
        s.push(Check::new(format!("padding encoding n={n}"), r.encoding_certified, "block-diagonal cycle, brute force agrees"));
        let (a, plus, minus) = &r.boundary;
        s.push(Check::new(
            format!("alpha_{} boundary n={n}", n - 1),
            a == plus,
            format!("alpha = {a}, (-1)^(n-1) d = {plus}, (-1)^n d = {minus}"),
        ));
        s.note(format!("ledger n={n}"));
        s.note(r.ledger.render());
    }
    Ok(())
}

fn appendix_b(s: &mut Section, o: &SuiteOpts) -> Result<()> {
    let ks: Vec<Rational> = o.ks_or(&[int(2)]);
    for k in &ks {
        let dl = certified_delta(GadgetKind::Loop, k)?;
        let dd = certified_delta(GadgetKind::Diamond, k)?;
        for a in [2i64, 3, 5, 20] {
            for (label, g) in single_weight_hosts(a)? {
                let e = eliminate_weights(&g, k, &BigInt::from(1u64 << 40))?;
                let zero_one = e.graph.edges().all(|(_, _, w)| w.is_zero() || w.is_one());
                let want = pow(&-k.clone(), e.gamma) * fermionant_sparse(&g, k);
                let (contracted, _) = fermionant_by_contraction(&e.graph, &e.top_blocks(), k)?;
                let direct = fermionant_sparse(&e.graph, k);
                let census = gamma_of_weight(&BigInt::from(a), dl, dd) == e.gamma;
                s.push(
                    Check::new(
                        format!("eliminate weight {a} on {label} k={k}"),
                        zero_one && census && contracted == want && direct == want,
                        format!("{} vertices, gamma {}", e.graph.n(), e.gamma),
                    )
                    .witness(|| format!("graph=[{}] k={k}", inline_graph(&g))),
                );
            }
        }
    }
    let k = int(2);
    for (label, a) in [("all-ones", RationalMatrix::from_i64(&[&[1, 1], &[1, 1]])?), ("identity", RationalMatrix::identity(2))] {
        let r = modular_pipeline(&a, &k, &ModularOptions::default())?;
        let detail = match r.first_failure() {
            None => format!("Ham = {}, both sides {} mod Lambda ({} digits)", r.hamiltonian, r.lhs, r.plan.modulus.to_string().len()),
            Some(st) => format!("stage `{}` failed: {}", st.name, st.detail),
        };
        s.push(Check::new(format!("modular congruence 2x2 {label} k=2"), r.holds(), detail).witness(|| format!("matrix=[{}] k=2", inline_matrix(&a))));
    }
    let a = RationalMatrix::from_i64(&[&[1, 1], &[1, 1]])?;
    let small = ModularOptions { modulus: Some(BigInt::from(1000)), ..ModularOptions::default() };
    s.push(match modular_pipeline(&a, &k, &small) {
        Err(e) => Check::new("modulus below the bound is refused", true, e.to_string()),
        Ok(_) => Check::failed("modulus below the bound is refused", "pipeline accepted Lambda = 1000", "reduce sharp-p --modulus 1000".into()),
    });
    Ok(())
}

fn single_weight_hosts(a: i64) -> Result<Vec<(&'static str, WeightedDigraph)>> {
    let mut two_cycle = WeightedDigraph::new(2);
    two_cycle.add_edge(1, 2, int(a))?;
    two_cycle.add_edge(2, 1, int(1))?;
    let mut k2 = two_cycle.clone();
    k2.add_edge(1, 1, int(1))?;
    k2.add_edge(2, 2, int(1))?;
    let mut looped = WeightedDigraph::new(1);
    looped.add_edge(1, 1, int(a))?;
    Ok(vec![("2-cycle", two_cycle), ("K2 with loops", k2), ("loop", looped)])
}

fn appendix_c(s: &mut Section, o: &SuiteOpts, rng: &mut ChaCha8Rng) -> Result<()> {
    let shapes: Vec<(usize, usize)> = match (o.k1, o.k2) {
        (Some(k1), Some(k2)) => vec![(k1, k2)],
        (None, None) => (1..=8).flat_map(|t| (0..=t / 2).map(move |k2| (t - k2, k2))).collect(),
        _ => return Err(Error::InvalidParameter("give both --k1 and --k2 or neither".into())),
    };
    let trials = o.trials_or(5);
    for (k1, k2) in &shapes {
        let r = two_column_identities(*k1, *k2, trials, rng, o.cap)?;
        let name = format!("[{k1},{k2}] {:?}", r.case);
        s.push(match r.checks.iter().find(|c| !c.holds()) {
            None => Check::new(name, true, format!("{} on {} bases", r.checks[0].name, r.checks.len())),
            Some(c) => Check::failed(name, format!("{}: {} != {}", c.name, c.lhs, c.rhs), format!("shape=[{k1},{k2}] seed={}", o.seed)),
        });
    }
    if o.k1.is_some() {
        return Ok(());
    }
    let ledger_trials = o.trials.unwrap_or(2).min(5);
    for n in o.sizes_or([6, 8]) {
        for delta in [1, 2] {
            let r = verify_constant_delta(n, delta, ledger_trials, rng, o.cap)?;
            let chains_ok = r.chains.iter().all(|c| c.holds());
            let totals_ok = r.totals.iter().all(|c| c.holds());
            s.push(Check::new(
                format!("constant-delta ledger n={n} delta={delta}"),
                chains_ok && totals_ok,
                format!(
                    "{} oracle terms, {} chain checks, {} totals against Ferm_2{}",
                    r.oracle_terms(),
                    r.chains.len(),
                    r.totals.len(),
                    if r.ledger.free.is_empty() { String::new() } else { format!(", free: {}", r.ledger.free.join(" ")) }
                ),
            ));
            s.note(format!("ledger n={n} delta={delta}"));
            s.note(r.ledger.render());
        }
    }
    let families = [
        ("[m,m]", FamilySpec::new(2, int(1))?, vec![2, 3]),
        ("[m,1]", FamilySpec::new(2, int(0))?, vec![5, 9]),
        ("[m,ceil(sqrt m)]", FamilySpec::new(2, frac(1, 2))?, vec![4, 9]),
        ("[m,ceil(sqrt m),ceil(sqrt m)]", FamilySpec::new(3, frac(1, 2))?, vec![4]),
    ];
    for (label, fam, ms) in families {
        let r = family_pipeline(&fam, &ms, 2, rng, o.cap)?;
        for m in &r.members {
            let steps: Vec<String> = m.steps.iter().map(|st| format!("{} {}", st.status, st.description)).collect();
            let name = format!("family {label} m={} {:?}", m.m, m.columns);
            let detail = format!("{}; {}", m.route, steps.join("; "));
            s.push(if m.steps.iter().all(|st| st.status == StepStatus::Skipped) { Check::skipped(name, detail) } else { Check::new(name, !m.failed(), detail) });
        }
    }
    Ok(())
}

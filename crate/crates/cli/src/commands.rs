use std::fs;
use std::path::Path;

use num_bigint::BigInt;

use fermionant::algebra::{parse_rational, Cap, Rational, RationalMatrix};
use fermionant::covers::{determinant_exact, fermionant, fermionant_dp, hamiltonian, permanent_ryser, Convention, WeightedDigraph};
use fermionant::gadgets::{
    search_diamond_certificate, search_iff_certificate, search_loop_certificate, spot_check_iff, GadgetCertificate, GadgetKind,
};
use fermionant::interpolation::{hamiltonian_via_fermionant, hamiltonian_via_fermionant_auto, modular_pipeline, ModularOptions};
use fermionant::reductions::{ferm2_via_square_immanants, family_pipeline, ClassSumOracle, FamilySpec};
use fermionant::young::{immanant, YoungDiagram};
use fermionant::{Error, Result};
use rand_chacha::ChaCha8Rng;

use crate::report::{inline_matrix, Check, Section};

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn load_matrix(path: &Path) -> Result<RationalMatrix> {
    RationalMatrix::parse(&read(path)?)
}

pub fn load_graph(path: &Path) -> Result<WeightedDigraph> {
    WeightedDigraph::parse(&read(path)?)
}

pub enum Input {
    Matrix(RationalMatrix),
    Graph(WeightedDigraph),
}

impl Input {
    pub fn load(matrix: Option<&Path>, graph: Option<&Path>) -> Result<Input> {
        match (matrix, graph) {
            (Some(m), None) => Ok(Input::Matrix(load_matrix(m)?)),
            (None, Some(g)) => Ok(Input::Graph(load_graph(g)?)),
            _ => Err(Error::InvalidParameter("give exactly one of --matrix or --graph".into())),
        }
    }

    fn matrix(&self) -> RationalMatrix {
        match self {
            Input::Matrix(a) => a.clone(),
            Input::Graph(g) => g.adjacency_matrix(),
        }
    }
}

pub fn eval_ferm(input: &Input, k: &Rational, conv: Convention, cap: Cap) -> Result<Rational> {
    match input {
        Input::Matrix(a) => fermionant(a, k, conv, cap),
        Input::Graph(g) => {
            let plain = fermionant_dp(g, k)?;
            Ok(if conv == Convention::Signed && g.n() % 2 == 1 { -plain } else { plain })
        }
    }
}

pub fn eval_imm(diagram: &str, input: &Input, cap: Cap) -> Result<Rational> {
    let y = YoungDiagram::parse(diagram)?;
    immanant(&y, &input.matrix(), cap)
}

pub fn eval_simple(what: &str, input: &Input) -> Result<Rational> {
    let a = input.matrix();
    Ok(match what {
        "ham" => hamiltonian(&a),
        "per" => permanent_ryser(&a),
        "det" => determinant_exact(&a),
        other => return Err(Error::InvalidParameter(format!("unknown evaluator `{other}`"))),
    })
}

pub fn load_certificate(path: &Path) -> Result<GadgetCertificate> {
    GadgetCertificate::from_json(&read(path)?)
}

pub fn reduce_ham(a: &RationalMatrix, k: &Rational, cert: Option<&Path>) -> Result<Section> {
    let mut s = Section::new("reduce ham");
    let recovered = match cert {
        Some(p) => {
            let c = load_certificate(p)?;
            if c.wiring.kind != GadgetKind::Iff {
                return Err(Error::Certificate(format!("{} holds a {:?} gadget, not iff", p.display(), c.wiring.kind)));
            }
            if &c.wiring.k != k {
                return Err(Error::Certificate(format!("certificate is for k = {}, requested k = {k}", c.wiring.k)));
            }
            if !spot_check_iff(&c.wiring)? {
                return Err(Error::Certificate("loaded wiring fails the spot check".into()));
            }
            hamiltonian_via_fermionant(a, k, &c.wiring)?
        }
        None => hamiltonian_via_fermionant_auto(a, k)?,
    };
    let direct = hamiltonian(a);
    s.push(
        Check::new(format!("Hamiltonian via Ferm_{k}"), recovered == direct, format!("recovered {recovered}, direct {direct}"))
            .witness(|| format!("matrix=[{}] k={k}", inline_matrix(a))),
    );
    Ok(s)
}

pub fn reduce_sharp_p(a: &RationalMatrix, k: &Rational, modulus: Option<BigInt>) -> Result<Section> {
    let mut s = Section::new("reduce sharp-p");
    let r = modular_pipeline(a, k, &ModularOptions { modulus, ..ModularOptions::default() })?;
    for st in &r.stages {
        s.push(Check::new(st.name, st.passed, st.detail.clone()));
    }
    s.note(format!("Lambda = {}", r.plan.modulus));
    s.note(format!("gamma = {}, omega = {}", r.plan.gamma, r.plan.omega));
    for e in &r.plan.ledger {
        s.note(format!("l={} size={} m={} gamma_l={} eliminated size={}", e.l, e.size, e.m, e.gamma, e.eliminated_size));
    }
    s.note(format!("Ham = {}, lhs = {}, rhs = {}", r.hamiltonian, r.lhs, r.rhs));
    if r.stages.is_empty() {
        s.push(Check::new("pipeline", r.holds(), "no stages ran"));
    }
    Ok(s)
}

pub fn reduce_ferm2(a: &RationalMatrix, cap: Cap) -> Result<Section> {
    let mut s = Section::new("reduce ferm2");
    let mut oracle = ClassSumOracle::new(cap);
    let got = ferm2_via_square_immanants(a, &mut oracle, cap)?;
    let want = fermionant(a, &Rational::from_integer(2.into()), Convention::Plain, cap)?;
    s.push(
        Check::new("Ferm_2 from square immanants", got == want, format!("ledger {got}, direct {want}, {} oracle calls", oracle.calls))
            .witness(|| format!("matrix=[{}]", inline_matrix(a))),
    );
    Ok(s)
}

pub fn reduce_family(columns: usize, epsilon: &str, ms: &[usize], trials: usize, rng: &mut ChaCha8Rng, cap: Cap) -> Result<Section> {
    let fam = FamilySpec::new(columns, parse_rational(epsilon)?)?;
    let r = family_pipeline(&fam, ms, trials, rng, cap)?;
    let mut s = Section::new(format!("family columns={columns} epsilon={}", fam.epsilon));
    for m in &r.members {
        s.push(Check::new(format!("m={} {:?}", m.m, m.columns), !m.failed(), m.route.clone()));
        for st in &m.steps {
            s.note(format!("m={}: {} {}", m.m, st.status, st.description));
        }
    }
    Ok(s)
}

pub fn gadget_search(kind: GadgetKind, k: &Rational) -> Result<GadgetCertificate> {
    match kind {
        GadgetKind::Iff => search_iff_certificate(k),
        GadgetKind::Loop => search_loop_certificate(k),
        GadgetKind::Diamond => search_diamond_certificate(k),
    }
}

pub fn certificate_section(title: &str, c: &GadgetCertificate) -> Section {
    let mut s = Section::new(title);
    let bad = c.rows.iter().filter(|r| r.expected != r.observed).count();
    s.push(Check::new(
        format!("{:?} gadget k={}", c.wiring.kind, c.wiring.k),
        c.is_complete(),
        format!("{} rows, {bad} mismatched, tier {:?}, variant {}", c.rows.len(), c.wiring.tier, c.wiring.variant),
    ));
    for case in &c.contract.cases {
        s.note(format!("case {}: factor {} ({}), cycle delta {}", case.label, case.factor, case.factor_formula, case.cycle_delta));
    }
    s
}

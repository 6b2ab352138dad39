use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{pow, rational_text, Rational};
use crate::covers::WeightedDigraph;
use crate::{Error, Result};

/// `coeff · k^k_power`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolicWeight {
    #[serde(with = "rational_text")]
    pub coeff: Rational,
    pub k_power: i32,
}

impl SymbolicWeight {
    pub fn constant(c: Rational) -> Self {
        SymbolicWeight { coeff: c, k_power: 0 }
    }

    pub fn unit() -> Self {
        Self::constant(Rational::one())
    }

    pub fn eval(&self, k: &Rational) -> Rational {
        if self.k_power == 0 {
            return self.coeff.clone();
        }
        &self.coeff * pow(k, self.k_power as i64)
    }
}

impl fmt::Display for SymbolicWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k_power {
            0 => write!(f, "{}", self.coeff),
            p => {
                let (num, den) = (self.coeff.numer(), self.coeff.denom());
                let kp = if p.abs() == 1 { "k".to_string() } else { format!("k^{}", p.abs()) };
                if p < 0 {
                    if den.is_one() {
                        write!(f, "{num}/{kp}")
                    } else {
                        write!(f, "{num}/({den}{kp})")
                    }
                } else {
                    write!(f, "{}*{kp}", self.coeff)
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GadgetKind {
    Iff,
    Loop,
    Diamond,
}

impl std::str::FromStr for GadgetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iff" => Ok(GadgetKind::Iff),
            "loop" => Ok(GadgetKind::Loop),
            "diamond" => Ok(GadgetKind::Diamond),
            o => Err(Error::Parse(format!("unknown gadget kind `{o}` (expected iff|loop|diamond)"))),
        }
    }
}

/// Host-side attachment points. `Tail(i)`/`Head(i)` are the endpoints of the i-th rerouted edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Terminal {
    Tail(usize),
    Head(usize),
    Anchor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    /// 1-based internal label.
    Internal(usize),
    Terminal(Terminal),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttachWeight {
    Unit,
    /// Carries the weight of the i-th rerouted host edge.
    Carried(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Attachment {
    pub from: Endpoint,
    pub to: Endpoint,
    pub weight: AttachWeight,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InternalEdge {
    pub from: usize,
    pub to: usize,
    pub weight: SymbolicWeight,
}

/// Which widening of the search produced an iff wiring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchTier {
    Verbatim,
    Transpose,
    SignVariant,
    EntryRepair,
    Structural,
}

/// A small subgraph plus the rule for splicing it into a host.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetWiring {
    pub kind: GadgetKind,
    #[serde(with = "rational_text")]
    pub k: Rational,
    pub tier: SearchTier,
    pub variant: String,
    pub internal: usize,
    pub internal_edges: Vec<InternalEdge>,
    pub attachments: Vec<Attachment>,
}

/// Host vertices and weights a wiring is spliced against.
#[derive(Clone, Debug, Default)]
pub struct Splice {
    pub terminals: BTreeMap<Terminal, usize>,
    pub carried: Vec<Rational>,
}

/// Result of splicing: internal vertex ids and the actual edge created for each attachment.
#[derive(Clone, Debug)]
pub struct Spliced {
    pub internals: Vec<usize>,
    pub attachment_edges: Vec<(usize, usize)>,
}

impl GadgetWiring {
    pub fn validate(&self) -> Result<()> {
        let ok = |e: &Endpoint| match e {
            Endpoint::Internal(i) => (1..=self.internal).contains(i),
            Endpoint::Terminal(_) => true,
        };
        for e in &self.internal_edges {
            if !(1..=self.internal).contains(&e.from) || !(1..=self.internal).contains(&e.to) {
                return Err(Error::Certificate(format!("internal edge {}->{} out of range", e.from, e.to)));
            }
        }
        for a in &self.attachments {
            if !ok(&a.from) || !ok(&a.to) {
                return Err(Error::Certificate(format!("attachment {a:?} references a missing internal vertex")));
            }
            if matches!((a.from, a.to), (Endpoint::Terminal(_), Endpoint::Terminal(_))) {
                return Err(Error::Certificate("attachments must touch an internal vertex".into()));
            }
        }
        Ok(())
    }

    /// Internal weight matrix evaluated at the wiring's k (zero where no edge).
    pub fn internal_matrix(&self) -> Vec<Vec<Rational>> {
        let mut m = vec![vec![Rational::zero(); self.internal]; self.internal];
        for e in &self.internal_edges {
            m[e.from - 1][e.to - 1] = e.weight.eval(&self.k);
        }
        m
    }

    /// Symbolic form of the internal matrix, entries printed in terms of k.
    pub fn symbolic_matrix(&self) -> Vec<Vec<String>> {
        let mut m = vec![vec!["0".to_string(); self.internal]; self.internal];
        for e in &self.internal_edges {
            m[e.from - 1][e.to - 1] = e.weight.to_string();
        }
        m
    }

    /// Adds the internal vertices and all edges to `g`.
    pub fn splice(&self, g: &mut WeightedDigraph, s: &Splice) -> Result<Spliced> {
        let first = g.add_vertices(self.internal);
        let internals: Vec<usize> = (first..first + self.internal).collect();
        for e in &self.internal_edges {
            let w = e.weight.eval(&self.k);
            if !w.is_zero() {
                g.add_edge(internals[e.from - 1], internals[e.to - 1], w)?;
            }
        }
        let resolve = |ep: &Endpoint| -> Result<usize> {
            match ep {
                Endpoint::Internal(i) => Ok(internals[i - 1]),
                Endpoint::Terminal(t) => s
                    .terminals
                    .get(t)
                    .copied()
                    .ok_or_else(|| Error::InvalidParameter(format!("terminal {t:?} not bound"))),
            }
        };
        let mut attachment_edges = Vec::with_capacity(self.attachments.len());
        for a in &self.attachments {
            let (u, v) = (resolve(&a.from)?, resolve(&a.to)?);
            let w = match a.weight {
                AttachWeight::Unit => Rational::one(),
                AttachWeight::Carried(i) => s
                    .carried
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::InvalidParameter(format!("carried weight {i} not bound")))?,
            };
            g.add_edge(u, v, w)?;
            attachment_edges.push((u, v));
        }
        Ok(Spliced { internals, attachment_edges })
    }
}

/// One row of a contract: which rerouted edges (or roles) are used, and the resulting factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractCase {
    pub label: String,
    pub uses: Vec<bool>,
    #[serde(with = "rational_text")]
    pub factor: Rational,
    pub factor_formula: String,
    pub cycle_delta: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetContract {
    pub kind: GadgetKind,
    #[serde(with = "rational_text")]
    pub k: Rational,
    pub cases: Vec<ContractCase>,
}

impl GadgetContract {
    pub fn iff(k: &Rational) -> Self {
        let half = (Rational::one() - k) / Rational::from_integer(2.into());
        let case = |label: &str, a, b, f: Rational, formula: &str| ContractCase {
            label: label.into(),
            uses: vec![a, b],
            factor: f,
            factor_formula: formula.into(),
            cycle_delta: 0,
        };
        GadgetContract {
            kind: GadgetKind::Iff,
            k: k.clone(),
            cases: vec![
                case("both", true, true, Rational::one(), "1"),
                case("e-only", true, false, Rational::zero(), "0"),
                case("e'-only", false, true, Rational::zero(), "0"),
                case("neither", false, false, half, "(1-k)/2"),
            ],
        }
    }

    pub fn case(&self, uses: &[bool]) -> Option<&ContractCase> {
        self.cases.iter().find(|c| c.uses == uses)
    }
}

/// One verified instance: host testbed, host cover, expected and observed factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestbedRow {
    #[serde(with = "rational_text")]
    pub k: Rational,
    pub testbed: String,
    pub cover: Vec<usize>,
    pub case: String,
    #[serde(with = "rational_text")]
    pub expected: Rational,
    #[serde(with = "rational_text")]
    pub observed: Rational,
    pub weightings: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetCertificate {
    pub format: String,
    pub wiring: GadgetWiring,
    pub contract: GadgetContract,
    pub rows: Vec<TestbedRow>,
}

pub const CERTIFICATE_FORMAT: &str = "fermionant-gadget-certificate/1";

impl GadgetCertificate {
    pub fn is_complete(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.expected == r.observed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cert: GadgetCertificate = serde_json::from_str(text).map_err(|e| Error::Certificate(e.to_string()))?;
        if cert.format != CERTIFICATE_FORMAT {
            return Err(Error::Certificate(format!("unsupported format `{}`", cert.format)));
        }
        cert.wiring.validate()?;
        if cert.wiring.kind != cert.contract.kind || cert.wiring.k != cert.contract.k {
            return Err(Error::Certificate("wiring and contract disagree on kind or k".into()));
        }
        if !cert.is_complete() {
            return Err(Error::Certificate("certificate contains unverified rows".into()));
        }
        Ok(cert)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{frac, int};

    #[test]
    fn symbolic_weights() {
        let w = SymbolicWeight { coeff: frac(1, 2), k_power: -1 };
        assert_eq!(w.eval(&int(3)), frac(1, 6));
        assert_eq!(w.to_string(), "1/(2k)");
        assert_eq!(SymbolicWeight { coeff: int(-1), k_power: -1 }.to_string(), "-1/k");
        assert_eq!(SymbolicWeight::constant(frac(-1, 2)).to_string(), "-1/2");
    }

    #[test]
    fn iff_contract_table() {
        let c = GadgetContract::iff(&int(3));
        assert_eq!(c.cases.len(), 4);
        assert_eq!(c.case(&[false, false]).unwrap().factor, int(-1));
        assert_eq!(GadgetContract::iff(&int(1)).case(&[false, false]).unwrap().factor, int(0));
    }
}

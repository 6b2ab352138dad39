use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Zero;

use super::padding::{column_pair, direct_immanant, mn_expansion, pad_with_cycle, ImmanantOracle, PaddedMatrix};
use crate::algebra::{solve_linear_particular, Cap, RationalMatrix, Rational};
use crate::young::{class_sums, YoungDiagram};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermKind {
    /// im_Y(A ⊕ C_pad), answered by the oracle.
    Oracle,
    /// im_Y(A) evaluated directly (determinant or a cheap diagram).
    Direct,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerTerm {
    pub label: String,
    pub kind: TermKind,
    pub shape: YoungDiagram,
    pub pad: usize,
    pub coeff: Rational,
}

impl LedgerTerm {
    pub fn oracle(label: impl Into<String>, shape: YoungDiagram, pad: usize) -> Self {
        LedgerTerm { label: label.into(), kind: TermKind::Oracle, shape, pad, coeff: Rational::zero() }
    }

    pub fn direct(label: impl Into<String>, shape: YoungDiagram) -> Self {
        LedgerTerm { label: label.into(), kind: TermKind::Direct, shape, pad: 0, coeff: Rational::zero() }
    }

    /// MN expansion of the term over diagrams of the base weight.
    pub fn expansion(&self) -> Vec<(YoungDiagram, i64)> {
        mn_expansion(&self.shape, self.pad)
    }
}

/// Coefficients x_t with Σ_t x_t · term_t = Σ_Y target_Y · im_Y, found by solving the linear system
/// the MN expansions impose, one equation per diagram.
#[derive(Clone, Debug)]
pub struct CoefficientLedger {
    pub n: usize,
    pub delta: usize,
    pub basis: Vec<YoungDiagram>,
    pub target: Vec<Rational>,
    pub terms: Vec<LedgerTerm>,
    /// Labels of unknowns left free (set to zero) because the system did not determine them.
    pub free: Vec<String>,
}

fn label_of(y: &YoungDiagram) -> String {
    let (a, b) = column_pair(y);
    format!("[{a},{b}]")
}

/// Solves for the term coefficients. Terms are pivoted in the order given, so oracle terms should
/// come first to keep the directly evaluated part as small as possible.
pub fn solve_ledger(n: usize, delta: usize, target: &[(YoungDiagram, Rational)], mut terms: Vec<LedgerTerm>) -> Result<CoefficientLedger> {
    let mut basis: Vec<YoungDiagram> = target.iter().map(|(y, _)| y.clone()).collect();
    for t in &terms {
        if t.shape.weight() != n + t.pad {
            return Err(Error::Dimension(format!("term {} has weight {} but pads a {n}x{n} matrix by {}", t.label, t.shape.weight(), t.pad)));
        }
        for (y, _) in t.expansion() {
            if !basis.contains(&y) {
                basis.push(y);
            }
        }
    }
    basis.sort_by_key(|y| std::cmp::Reverse(column_pair(y)));
    let index: BTreeMap<&YoungDiagram, usize> = basis.iter().enumerate().map(|(i, y)| (y, i)).collect();
    let mut rows = vec![vec![Rational::zero(); terms.len()]; basis.len()];
    for (j, t) in terms.iter().enumerate() {
        for (y, s) in t.expansion() {
            rows[index[&y]][j] += Rational::from_integer(s.into());
        }
    }
    let mut rhs = vec![Rational::zero(); basis.len()];
    for (y, d) in target {
        rhs[index[y]] += d;
    }
    let (x, free) = solve_linear_particular(&rows, &rhs)?;
    for (t, c) in terms.iter_mut().zip(x) {
        t.coeff = c;
    }
    let free = free.into_iter().map(|j| terms[j].label.clone()).collect();
    Ok(CoefficientLedger { n, delta, basis, target: rhs, terms, free })
}

impl CoefficientLedger {
    pub fn coeff(&self, label: &str) -> Option<&Rational> {
        self.terms.iter().find(|t| t.label == label).map(|t| &t.coeff)
    }

    /// Coefficient of each basis diagram in Σ_t x_t · expansion_t, restricted to `filter` terms.
    pub fn expanded(&self, filter: impl Fn(&LedgerTerm) -> bool) -> Vec<(YoungDiagram, Rational)> {
        let mut out: Vec<Rational> = vec![Rational::zero(); self.basis.len()];
        for t in self.terms.iter().filter(|t| filter(t)) {
            for (y, s) in t.expansion() {
                let i = self.basis.iter().position(|b| *b == y).unwrap();
                out[i] += &t.coeff * Rational::from_integer(s.into());
            }
        }
        self.basis.iter().cloned().zip(out).collect()
    }

    /// Σ_t x_t · value_t on a matrix, oracle terms through `oracle`.
    pub fn evaluate(&self, a: &RationalMatrix, oracle: &mut dyn ImmanantOracle, cap: Cap) -> Result<Rational> {
        self.evaluate_terms(a, oracle, cap, |_| true)
    }

    pub fn evaluate_terms(
        &self,
        a: &RationalMatrix,
        oracle: &mut dyn ImmanantOracle,
        cap: Cap,
        filter: impl Fn(&LedgerTerm) -> bool,
    ) -> Result<Rational> {
        let sums = class_sums(a, cap)?;
        let mut total = Rational::zero();
        for t in self.terms.iter().filter(|t| filter(t) && !t.coeff.is_zero()) {
            let v = match t.kind {
                TermKind::Direct => direct_immanant(&t.shape, a, &sums)?,
                TermKind::Oracle => {
                    let m = if t.pad == 0 { PaddedMatrix::unpadded(a) } else { pad_with_cycle(a, t.pad)? };
                    oracle.immanant(&t.shape, &m)?
                }
            };
            total += &t.coeff * v;
        }
        Ok(total)
    }

    /// The solved system, one line per term and per equation.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for t in &self.terms {
            let kind = match t.kind {
                TermKind::Oracle => format!("im{}(A ⊕ C_{})", label_of(&t.shape), t.pad),
                TermKind::Direct => format!("im{}(A) direct", label_of(&t.shape)),
            };
            let _ = writeln!(s, "{} = {}    {}", t.label, t.coeff, kind);
        }
        for (i, y) in self.basis.iter().enumerate() {
            let parts: Vec<String> = self
                .terms
                .iter()
                .filter_map(|t| {
                    let c: i64 = t.expansion().iter().filter(|(z, _)| z == y).map(|(_, s)| s).sum();
                    (c != 0).then(|| format!("{}{}", if c < 0 { "-" } else { "+" }, t.label))
                })
                .collect();
            let _ = writeln!(s, "{}: {} = {}", label_of(y), if parts.is_empty() { "0".into() } else { parts.join(" ") }, self.target[i]);
        }
        if !self.free.is_empty() {
            let _ = writeln!(s, "free (set to 0): {}", self.free.join(", "));
        }
        s
    }
}

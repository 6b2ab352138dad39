use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::padding::{BruteForceOracle, ClassSumOracle, ImmanantOracle};
use super::squares::square_report;
use super::two_column::{branch_2d_identity, classify, single_hook_identity, IdentityCheck, TwoColumnCase};
use crate::algebra::{Cap, Rational};
use crate::sampling;
use crate::{Error, Result};

/// Diagrams with `columns` columns: the first of length m, the others of length ⌈m^ε⌉.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub columns: usize,
    pub epsilon: Rational,
}

impl FamilySpec {
    pub fn new(columns: usize, epsilon: Rational) -> Result<Self> {
        if columns < 2 {
            return Err(Error::InvalidParameter(format!("a family needs at least 2 columns, got {columns}")));
        }
        if epsilon.is_negative() || epsilon > Rational::one() {
            return Err(Error::InvalidParameter(format!("ε must lie in [0, 1], got {epsilon}")));
        }
        Ok(FamilySpec { columns, epsilon })
    }

    /// Column lengths of the member with first column m.
    pub fn member(&self, m: usize) -> Vec<usize> {
        let c = ceil_power(m, &self.epsilon).min(m);
        let mut cols = vec![m];
        cols.extend(std::iter::repeat_n(c, self.columns - 1));
        cols
    }
}

/// ⌈m^ε⌉ in exact arithmetic: the least c with c^q ≥ m^p for ε = p/q.
pub fn ceil_power(m: usize, eps: &Rational) -> usize {
    if m <= 1 || eps.is_zero() {
        return 1;
    }
    let p: u32 = eps.numer().try_into().expect("small exponent");
    let q: u32 = eps.denom().try_into().expect("small exponent");
    let target = BigInt::from(m).pow(p);
    let mut c = 1usize;
    while BigInt::from(c).pow(q) < target {
        c += 1;
    }
    c
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepStatus {
    Pass,
    Fail,
    /// Cited externally and not computed.
    Assumed,
    Skipped,
}

impl fmt::Display for StepStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepStatus::Pass => "PASS",
            StepStatus::Fail => "FAIL",
            StepStatus::Assumed => "ASSUMED",
            StepStatus::Skipped => "SKIPPED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStep {
    pub description: String,
    pub status: StepStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemberReport {
    pub m: usize,
    pub columns: Vec<usize>,
    pub route: String,
    pub steps: Vec<ChainStep>,
}

impl MemberReport {
    pub fn failed(&self) -> bool {
        self.steps.iter().any(|s| s.status == StepStatus::Fail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyReport {
    pub family: FamilySpec,
    pub members: Vec<MemberReport>,
}

impl FamilyReport {
    pub fn holds(&self) -> bool {
        !self.members.iter().any(MemberReport::failed)
    }
}

fn step(description: impl Into<String>, status: StepStatus) -> ChainStep {
    ChainStep { description: description.into(), status }
}

fn identity_step(checks: Result<Vec<IdentityCheck>>) -> ChainStep {
    match checks {
        Ok(cs) => {
            let ok = cs.iter().all(IdentityCheck::holds);
            let name = cs.first().map(|c| c.name.clone()).unwrap_or_default();
            step(format!("{name} on {} bases", cs.len()), if ok { StepStatus::Pass } else { StepStatus::Fail })
        }
        Err(e) => step(format!("not evaluated: {e}"), StepStatus::Skipped),
    }
}

fn oracle_for(size: usize, cap: Cap) -> Box<dyn ImmanantOracle> {
    if size <= cap.0 { Box::new(BruteForceOracle { cap }) } else { Box::new(ClassSumOracle::new(cap)) }
}

fn square_step<R: Rng + ?Sized>(c: usize, trials: usize, rng: &mut R, cap: Cap) -> ChainStep {
    match square_report(2 * c, trials, rng, cap) {
        Ok(r) if r.holds() => step(format!("[{c},{c}] via the square-immanant ledger, n = {}", 2 * c), StepStatus::Pass),
        Ok(_) => step(format!("[{c},{c}] square-immanant ledger"), StepStatus::Fail),
        Err(e) => step(format!("[{c},{c}] square-immanant ledger not evaluated: {e}"), StepStatus::Skipped),
    }
}

/// Walks the reduction chain for each sampled member of the family, checking every computable
/// identity at desk scale on `trials` random bases.
pub fn family_pipeline<R: Rng + ?Sized>(family: &FamilySpec, ms: &[usize], trials: usize, rng: &mut R, cap: Cap) -> Result<FamilyReport> {
    let mut members = Vec::new();
    for &m in ms {
        if m == 0 {
            return Err(Error::InvalidParameter("sampled m must be positive".into()));
        }
        let columns = family.member(m);
        let mut steps = Vec::new();
        if family.epsilon.is_zero() {
            steps.push(step("boxes right of the first column stay bounded", StepStatus::Skipped));
            members.push(MemberReport { m, columns, route: "VP regime, no reduction attempted".into(), steps });
            continue;
        }
        if family.columns > 2 {
            steps.push(step(format!("strip {} trailing columns by row-removal projection", family.columns - 2), StepStatus::Assumed));
        }
        let (k1, k2) = (m, columns[1]);
        let route;
        match classify(k1, k2)? {
            TwoColumnCase::Square => {
                route = "square".to_string();
                steps.push(square_step(k2, trials, rng, cap));
            }
            TwoColumnCase::SingleHook => {
                route = "single hook".to_string();
                let mut oracle = oracle_for(k1 + k2, cap);
                let checks = (0..trials)
                    .map(|_| single_hook_identity(k1, k2, &sampling::matrix(rng, 2 * k2), oracle.as_mut(), cap))
                    .collect();
                steps.push(identity_step(checks));
                steps.push(square_step(k2, trials, rng, cap));
            }
            case => {
                let delta = k1 - k2;
                route = "branch [2δ,δ]".to_string();
                if case == TwoColumnCase::Between {
                    steps.push(step(format!("project [{k1},{k2}] to [{},{delta}] by removing {} rows", 2 * delta, k2 - delta), StepStatus::Assumed));
                }
                let mut oracle = oracle_for(3 * delta, cap);
                let checks = (0..trials).map(|_| branch_2d_identity(delta, &sampling::matrix(rng, 2 * delta), oracle.as_mut(), cap)).collect();
                steps.push(identity_step(checks));
                steps.push(square_step(delta, trials, rng, cap));
            }
        }
        members.push(MemberReport { m, columns, route, steps });
    }
    Ok(FamilyReport { family: family.clone(), members })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::frac;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_ceilings() {
        assert_eq!(ceil_power(4, &frac(1, 2)), 2);
        assert_eq!(ceil_power(5, &frac(1, 2)), 3);
        assert_eq!(ceil_power(8, &frac(1, 3)), 2);
        assert_eq!(ceil_power(7, &Rational::one()), 7);
    }

    #[test]
    fn routes() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let sq = family_pipeline(&FamilySpec::new(2, Rational::one()).unwrap(), &[2], 2, &mut rng, Cap::default()).unwrap();
        assert_eq!(sq.members[0].route, "square");
        assert!(sq.holds());
        let vp = family_pipeline(&FamilySpec::new(2, Rational::zero()).unwrap(), &[5], 1, &mut rng, Cap::default()).unwrap();
        assert!(vp.members[0].route.starts_with("VP regime"));
        let root = family_pipeline(&FamilySpec::new(2, frac(1, 2)).unwrap(), &[4], 2, &mut rng, Cap::default()).unwrap();
        assert_eq!(root.members[0].columns, vec![4, 2]);
        assert!(root.members[0].route.starts_with("branch"));
        assert!(root.holds());
    }
}

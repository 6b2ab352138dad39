use num_traits::{One, Zero};
use rand::Rng;

use super::ledger::{solve_ledger, CoefficientLedger, LedgerTerm, TermKind};
use super::squares::square_report;
use super::padding::{cycle_matrix, column_pair, mn_expansion, pad_with_cycle, two_column, BruteForceOracle, ClassSumOracle, ImmanantOracle, PaddedMatrix};
use crate::algebra::{Cap, Rational, RationalMatrix};
use crate::covers::{determinant_exact, fermionant, Convention};
use crate::sampling;
use crate::young::{class_sums, immanant, decomposition_coeffs, ClassSums};
use crate::{Error, Result};

fn sign(e: usize) -> Rational {
    if e % 2 == 0 { Rational::one() } else { -Rational::one() }
}

/// Which reduction applies to the two-column diagram [k1, k2] (column lengths), δ = k1 − k2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwoColumnCase {
    /// δ = 0.
    Square,
    /// k1 > 2 k2: one hook of size δ.
    SingleHook,
    /// k1 = 2 k2.
    Branch,
    /// k2 < k1 < 2 k2.
    Between,
}

pub fn classify(k1: usize, k2: usize) -> Result<TwoColumnCase> {
    if k1 < k2 || k1 == 0 {
        return Err(Error::InvalidPartition(format!("columns [{k1},{k2}] do not form a diagram")));
    }
    Ok(if k1 == k2 {
        TwoColumnCase::Square
    } else if k1 > 2 * k2 {
        TwoColumnCase::SingleHook
    } else if k1 == 2 * k2 {
        TwoColumnCase::Branch
    } else {
        TwoColumnCase::Between
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// im_{[k1,k2]}(A ⊕ C_δ) = (−1)^{δ−1} im_{[k2,k2]}(A), A of size 2 k2, k1 > 2 k2 ≥ 2.
pub fn single_hook_identity(k1: usize, k2: usize, a: &RationalMatrix, oracle: &mut dyn ImmanantOracle, cap: Cap) -> Result<IdentityCheck> {
    if classify(k1, k2)? != TwoColumnCase::SingleHook || k2 == 0 {
        return Err(Error::InvalidParameter(format!("[{k1},{k2}] is not a single-hook shape with k2 >= 1")));
    }
    check_size(a, 2 * k2)?;
    let delta = k1 - k2;
    let lhs = oracle.immanant(&two_column(k1, k2)?, &pad_with_cycle(a, delta)?)?;
    let rhs = sign(delta - 1) * class_sums(a, cap)?.immanant(&two_column(k2, k2)?)?;
    Ok(IdentityCheck { name: format!("single hook [{k1},{k2}]"), lhs, rhs })
}

/// im_{[2δ,δ]}(A ⊕ C_δ) = (−1)^{δ−1}(im_{[δ,δ]}(A) + det A), A of size 2δ.
pub fn branch_2d_identity(delta: usize, a: &RationalMatrix, oracle: &mut dyn ImmanantOracle, cap: Cap) -> Result<IdentityCheck> {
    if delta == 0 {
        return Err(Error::InvalidParameter("the [2δ,δ] identity needs δ >= 1".into()));
    }
    check_size(a, 2 * delta)?;
    let lhs = oracle.immanant(&two_column(2 * delta, delta)?, &pad_with_cycle(a, delta)?)?;
    let square = class_sums(a, cap)?.immanant(&two_column(delta, delta)?)?;
    let rhs = sign(delta - 1) * (square + determinant_exact(a));
    Ok(IdentityCheck { name: format!("branch [{},{delta}]", 2 * delta), lhs, rhs })
}

/// im_Y(A ⊕ C_s) against its MN expansion over diagrams of A, for any shape and pad.
pub fn padded_expansion_identity(k1: usize, k2: usize, s: usize, a: &RationalMatrix, oracle: &mut dyn ImmanantOracle, sums: &ClassSums) -> Result<IdentityCheck> {
    let y = two_column(k1, k2)?;
    check_size(a, k1 + k2 - s)?;
    let m = if s == 0 { PaddedMatrix::unpadded(a) } else { pad_with_cycle(a, s)? };
    let lhs = oracle.immanant(&y, &m)?;
    let mut rhs = Rational::zero();
    for (z, e) in mn_expansion(&y, s) {
        rhs += Rational::from_integer(e.into()) * sums.immanant(&z)?;
    }
    Ok(IdentityCheck { name: format!("MN expansion [{k1},{k2}] pad {s}"), lhs, rhs })
}

fn check_size(a: &RationalMatrix, n: usize) -> Result<()> {
    if a.n() != n {
        return Err(Error::Dimension(format!("expected a {n}x{n} base matrix, got {0}x{0}", a.n())));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct TwoColumnReport {
    pub k1: usize,
    pub k2: usize,
    pub case: TwoColumnCase,
    pub checks: Vec<IdentityCheck>,
}

impl TwoColumnReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(IdentityCheck::holds)
    }
}

/// Runs whichever identity applies to [k1, k2] on `trials` random bases. The padded side is
/// evaluated by brute force over the composite, the other side from class sums of A.
pub fn two_column_identities<R: Rng + ?Sized>(k1: usize, k2: usize, trials: usize, rng: &mut R, cap: Cap) -> Result<TwoColumnReport> {
    let case = classify(k1, k2)?;
    let delta = k1 - k2;
    let mut checks = Vec::new();
    let mut brute = BruteForceOracle { cap: Cap(cap.0.max(k1 + k2)) };
    match case {
        TwoColumnCase::SingleHook if k2 == 0 => {
            // empty base: the composite is the cycle alone and im of the empty diagram is 1
            let lhs = immanant(&two_column(k1, 0)?, &cycle_matrix(k1), brute.cap)?;
            checks.push(IdentityCheck { name: format!("single hook [{k1},0] on the bare cycle"), lhs, rhs: sign(k1 - 1) });
        }
        TwoColumnCase::SingleHook => {
            for _ in 0..trials {
                let a = sampling::matrix(rng, 2 * k2);
                checks.push(single_hook_identity(k1, k2, &a, &mut brute, cap)?);
            }
        }
        TwoColumnCase::Branch => {
            for _ in 0..trials {
                let a = sampling::matrix(rng, 2 * delta);
                checks.push(branch_2d_identity(delta, &a, &mut brute, cap)?);
            }
        }
        TwoColumnCase::Square => {
            let r = square_report(2 * k1, trials, rng, cap)?;
            for (got, want) in r.pipeline {
                checks.push(IdentityCheck { name: format!("Ferm_2 from square immanants, n = {}", 2 * k1), lhs: got, rhs: want });
            }
        }
        TwoColumnCase::Between => {
            for _ in 0..trials {
                let a = sampling::matrix(rng, 2 * k2);
                let sums = class_sums(&a, cap)?;
                checks.push(padded_expansion_identity(k1, k2, delta, &a, &mut brute, &sums)?);
            }
        }
    }
    Ok(TwoColumnReport { k1, k2, case, checks })
}

/// Ledger rebuilding Ferm_2 on n×n matrices (n even) from oracle calls to two-column immanants
/// whose columns differ by exactly δ, plus direct immanants with at most 2δ+1 boxes in the second
/// column. Oracle terms form three chains:
///
/// * `a_l`: [l+δ+1, l+1] padded by 2l−n+δ+2, for n/2+δ+1 ≤ l ≤ n−δ−1
/// * `c_j`: [n/2+δ+1+j, n/2+1+j] padded by δ+2j+2, for 0 ≤ j ≤ δ
/// * `b_j`: [n/2−j+δ, n/2−j] padded by δ−2j, for δ−2j ≥ 1
pub fn constant_delta_ledger(n: usize, delta: usize, cap: Cap) -> Result<CoefficientLedger> {
    if n % 2 != 0 || n < 2 {
        return Err(Error::InvalidParameter(format!("constant-δ ledger needs even n >= 2, got {n}")));
    }
    if delta == 0 {
        return Err(Error::InvalidParameter("δ = 0 is the square case".into()));
    }
    let h = n / 2;
    let d = decomposition_coeffs(n, &Rational::from_integer(2.into()), cap)?;
    let target: Vec<_> = (h..=n)
        .map(|i| {
            let y = two_column(i, n - i)?;
            let c = d.get(&y);
            Ok((y, c))
        })
        .collect::<Result<_>>()?;
    let mut terms = Vec::new();
    for l in h + delta + 1..n.saturating_sub(delta) {
        terms.push(LedgerTerm::oracle(format!("a_{l}"), two_column(l + delta + 1, l + 1)?, 2 * l - n + delta + 2));
    }
    for j in 0..=delta {
        terms.push(LedgerTerm::oracle(format!("c_{j}"), two_column(h + delta + 1 + j, h + 1 + j)?, delta + 2 * j + 2));
    }
    for j in 0..=delta {
        if delta >= 2 * j + 1 && h >= j {
            terms.push(LedgerTerm::oracle(format!("b_{j}"), two_column(h - j + delta, h - j)?, delta - 2 * j));
        }
    }
    for i in h..=n {
        if n - i <= 2 * delta + 1 {
            terms.push(LedgerTerm::direct(format!("r_{i}"), two_column(i, n - i)?));
        }
    }
    let mut ledger = solve_ledger(n, delta, &target, terms)?;
    ledger.delta = delta;
    Ok(ledger)
}

#[derive(Clone, Debug)]
pub struct ConstantDeltaReport {
    pub n: usize,
    pub delta: usize,
    pub ledger: CoefficientLedger,
    /// Every oracle term against its MN expansion.
    pub chains: Vec<IdentityCheck>,
    /// Whole ledger against Ferm_2, one per trial.
    pub totals: Vec<IdentityCheck>,
}

impl ConstantDeltaReport {
    pub fn holds(&self) -> bool {
        self.chains.iter().chain(&self.totals).all(IdentityCheck::holds)
    }

    pub fn oracle_terms(&self) -> usize {
        self.ledger.terms.iter().filter(|t| t.kind == TermKind::Oracle && !t.coeff.is_zero()).count()
    }
}

pub fn verify_constant_delta<R: Rng + ?Sized>(n: usize, delta: usize, trials: usize, rng: &mut R, cap: Cap) -> Result<ConstantDeltaReport> {
    let ledger = constant_delta_ledger(n, delta, cap)?;
    let two = Rational::from_integer(2.into());
    let mut oracle = ClassSumOracle::new(cap);
    let mut chains = Vec::new();
    let mut totals = Vec::new();
    for _ in 0..trials {
        let a = sampling::matrix(rng, n);
        let sums = class_sums(&a, cap)?;
        for t in ledger.terms.iter().filter(|t| t.kind == TermKind::Oracle) {
            let (k1, k2) = column_pair(&t.shape);
            let mut c = padded_expansion_identity(k1, k2, t.pad, &a, &mut oracle, &sums)?;
            c.name = format!("{}: {}", t.label, c.name);
            chains.push(c);
        }
        let lhs = ledger.evaluate(&a, &mut oracle, cap)?;
        let rhs = fermionant(&a, &two, Convention::Plain, cap)?;
        totals.push(IdentityCheck { name: format!("ledger n={n} δ={delta}"), lhs, rhs });
    }
    Ok(ConstantDeltaReport { n, delta, ledger, chains, totals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn classification() {
        assert_eq!(classify(5, 2).unwrap(), TwoColumnCase::SingleHook);
        assert_eq!(classify(4, 2).unwrap(), TwoColumnCase::Branch);
        assert_eq!(classify(5, 3).unwrap(), TwoColumnCase::Between);
        assert_eq!(classify(3, 3).unwrap(), TwoColumnCase::Square);
        assert!(classify(2, 3).is_err());
    }

    #[test]
    fn five_two_single_hook() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = two_column_identities(5, 2, 3, &mut rng, Cap::default()).unwrap();
        assert!(r.holds() && r.checks.len() == 3);
    }

    #[test]
    fn four_two_branch() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let r = two_column_identities(4, 2, 3, &mut rng, Cap::default()).unwrap();
        assert_eq!(r.case, TwoColumnCase::Branch);
        assert!(r.holds());
    }

    #[test]
    fn constant_delta_six_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r = verify_constant_delta(6, 1, 2, &mut rng, Cap::default()).unwrap();
        assert!(r.holds(), "{}", r.ledger.render());
    }
}

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Convention, WeightedDigraph};
use crate::algebra::{permutations, pow, Cap, Rational, RationalMatrix};
use crate::{Error, Result};

/// Brute force over S_n: Σ_π (−k)^{c(π)} Π A_{i,π(i)}, times (−1)^n when signed.
pub fn fermionant(a: &RationalMatrix, k: &Rational, convention: Convention, cap: Cap) -> Result<Rational> {
    let n = a.n();
    let mk = -k.clone();
    let powers: Vec<Rational> = (0..=n).map(|c| pow(&mk, c as i64)).collect();
    let mut total = Rational::zero();
    for p in permutations(n, cap)? {
        let Some(w) = product_along(a, p.images0()) else { continue };
        total += w * &powers[p.cycle_count()];
    }
    if convention == Convention::Signed && n % 2 == 1 {
        total = -total;
    }
    Ok(total)
}

pub(crate) fn product_along(a: &RationalMatrix, images: &[usize]) -> Option<Rational> {
    let mut w = Rational::one();
    for (i, &j) in images.iter().enumerate() {
        let x = a.at(i, j);
        if x.is_zero() {
            return None;
        }
        w *= x;
    }
    Some(w)
}

/// Permanent by summing over all of S_n.
pub fn permanent_brute(a: &RationalMatrix, cap: Cap) -> Result<Rational> {
    let mut total = Rational::zero();
    for p in permutations(a.n(), cap)? {
        if let Some(w) = product_along(a, p.images0()) {
            total += w;
        }
    }
    Ok(total)
}

/// Ryser's inclusion–exclusion formula, visiting column subsets in Gray-code order.
pub fn permanent_ryser(a: &RationalMatrix) -> Rational {
    let n = a.n();
    assert!(n < 64, "Ryser evaluation needs n < 64");
    let mut row_sums = vec![Rational::zero(); n];
    let mut total = Rational::zero();
    let mut gray: u64 = 0;
    for step in 1u64..(1u64 << n) {
        let bit = step.trailing_zeros() as usize;
        gray ^= 1 << bit;
        let adding = gray & (1 << bit) != 0;
        for (i, s) in row_sums.iter_mut().enumerate() {
            if adding {
                *s += a.at(i, bit);
            } else {
                *s -= a.at(i, bit);
            }
        }
        let prod: Rational = row_sums.iter().fold(Rational::one(), |acc, s| acc * s);
        if (gray.count_ones() as usize) % 2 == n % 2 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    total
}

/// Determinant by Bareiss elimination after clearing denominators row by row.
pub fn determinant_exact(a: &RationalMatrix) -> Rational {
    let n = a.n();
    let mut scale = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let l = a.row(i).iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        m.push(a.row(i).iter().map(|x| x.numer() * (&l / x.denom())).collect());
        scale *= l;
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            sign = -sign;
        }
        for r in col + 1..n {
            for c in col + 1..n {
                let v = (&m[r][c] * &m[col][col] - &m[r][col] * &m[col][c]) / &prev;
                m[r][c] = v;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[col][col].clone();
    }
    Rational::new(sign * &m[n - 1][n - 1], scale)
}

/// Sum over single-cycle permutations, via a Held–Karp path sum anchored at vertex 1.
pub fn hamiltonian(a: &RationalMatrix) -> Rational {
    let n = a.n();
    assert!(n <= 24, "Hamiltonian path sums need n <= 24");
    if n == 1 {
        return a.at(0, 0).clone();
    }
    // dp[mask][v]: weight of paths from vertex 0 through the vertex set {0} ∪ mask, ending at v.
    let m = n - 1;
    let mut dp = vec![Rational::zero(); (1 << m) * n];
    for v in 1..n {
        dp[(1 << (v - 1)) * n + v] = a.at(0, v).clone();
    }
    for mask in 1usize..(1 << m) {
        for v in 1..n {
            if mask & (1 << (v - 1)) == 0 {
                continue;
            }
            let cur = dp[mask * n + v].clone();
            if cur.is_zero() {
                continue;
            }
            for t in 1..n {
                if mask & (1 << (t - 1)) != 0 || a.at(v, t).is_zero() {
                    continue;
                }
                let idx = (mask | (1 << (t - 1))) * n + t;
                dp[idx] += &cur * a.at(v, t);
            }
        }
    }
    let full = (1 << m) - 1;
    (1..n).map(|v| &dp[full * n + v] * a.at(v, 0)).sum()
}

/// Plain fermionant of a graph by subset recursion on the cycle through the least uncovered vertex.
pub fn fermionant_dp(g: &WeightedDigraph, k: &Rational) -> Result<Rational> {
    let n = g.n();
    if n > 24 {
        return Err(Error::InvalidParameter(format!("subset recursion needs n <= 24, got {n}")));
    }
    if n == 0 {
        return Ok(Rational::one());
    }
    let w: Vec<Vec<Option<Rational>>> = (1..=n)
        .map(|u| (1..=n).map(|v| g.weight(u, v).filter(|x| !x.is_zero()).cloned()).collect())
        .collect();
    let mk = -k.clone();
    // cyc[mask]: total weight of simple cycles on exactly `mask` whose least vertex is the low bit of mask.
    let mut cyc = vec![Rational::zero(); 1 << n];
    for s in 0..n {
        let free = n - s - 1;
        let width = free + 1;
        // path[sub][e]: paths from s visiting s plus the vertices of `sub` (bits over s+1..n) ending at
        // s (e = 0) or at vertex s+e.
        let mut path = vec![Rational::zero(); (1 << free) * width];
        path[0] = Rational::one();
        for sub in 0usize..(1 << free) {
            for e in 0..width {
                if (e == 0 && sub != 0) || (e > 0 && sub & (1 << (e - 1)) == 0) {
                    continue;
                }
                let cur = path[sub * width + e].clone();
                if cur.is_zero() {
                    continue;
                }
                let end = s + e;
                if let Some(back) = &w[end][s] {
                    cyc[(sub << (s + 1)) | (1 << s)] += &cur * back;
                }
                for t in 1..width {
                    if sub & (1 << (t - 1)) != 0 {
                        continue;
                    }
                    if let Some(x) = &w[end][s + t] {
                        path[(sub | (1 << (t - 1))) * width + t] += &cur * x;
                    }
                }
            }
        }
    }
    let mut f = vec![Rational::zero(); 1 << n];
    f[0] = Rational::one();
    for set in 1usize..(1 << n) {
        let low = set & set.wrapping_neg();
        let rest = set ^ low;
        let mut acc = Rational::zero();
        let mut sub = rest;
        loop {
            let mask = sub | low;
            if !cyc[mask].is_zero() && !f[set ^ mask].is_zero() {
                acc += &cyc[mask] * &f[set ^ mask];
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        f[set] = acc * &mk;
    }
    Ok(f[(1 << n) - 1].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{frac, int};

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_i64(rows).unwrap()
    }

    #[test]
    fn two_by_two_closed_forms() {
        let (a, b, c, d) = (3, 5, 7, 11);
        let x = m(&[&[a, b], &[c, d]]);
        assert_eq!(fermionant(&x, &int(2), Convention::Plain, Cap::default()).unwrap(), int(4 * a * d - 2 * b * c));
        assert_eq!(permanent_ryser(&x), int(a * d + b * c));
        assert_eq!(determinant_exact(&x), int(a * d - b * c));
        assert_eq!(hamiltonian(&x), int(b * c));
    }

    #[test]
    fn one_by_one() {
        let x = RationalMatrix::from_rows(vec![vec![frac(2, 3)]]).unwrap();
        assert_eq!(fermionant(&x, &int(5), Convention::Signed, Cap::default()).unwrap(), frac(10, 3));
        assert_eq!(fermionant(&x, &int(5), Convention::Plain, Cap::default()).unwrap(), frac(-10, 3));
    }

    #[test]
    fn identity_and_ones() {
        for n in 1..6 {
            let id = RationalMatrix::identity(n);
            assert_eq!(permanent_ryser(&id), int(1));
            assert_eq!(determinant_exact(&id), int(1));
            if n >= 2 {
                assert!(hamiltonian(&id).is_zero());
            }
        }
        assert_eq!(hamiltonian(&m(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]])), int(2));
    }

    #[test]
    fn dp_small_cases() {
        assert!(fermionant_dp(&WeightedDigraph::new(3), &int(2)).unwrap().is_zero());
        let mut g = WeightedDigraph::new(1);
        g.add_edge(1, 1, int(7)).unwrap();
        assert_eq!(fermionant_dp(&g, &int(3)).unwrap(), int(-21));
    }

    #[test]
    fn determinant_with_fractions_and_pivoting() {
        let x = RationalMatrix::from_rows(vec![
            vec![int(0), frac(1, 2), int(1)],
            vec![frac(2, 3), int(0), int(-1)],
            vec![int(1), int(1), frac(1, 4)],
        ])
        .unwrap();
        let brute = fermionant(&x, &int(1), Convention::Signed, Cap::default()).unwrap();
        assert_eq!(determinant_exact(&x), brute);
    }
}

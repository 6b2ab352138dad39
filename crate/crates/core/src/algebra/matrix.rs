use std::fmt;

use num_traits::{One, Zero};

use super::rational::{parse_rational, Rational};
use crate::{Error, Result};

/// Square matrix of exact rationals, stored row-major.
///
/// `get`/`set` take 1-based indices; `at` is the 0-based accessor used by the evaluators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "matrices are at least 1x1");
        RationalMatrix { n, entries: vec![Rational::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Dimension("empty matrix".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension(format!("row {} has {} entries, expected {n}", i + 1, row.len())));
            }
            entries.extend(row);
        }
        Ok(RationalMatrix { n, entries })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| super::int(v)).collect()).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        assert!((1..=self.n).contains(&i) && (1..=self.n).contains(&j), "index ({i}, {j}) out of range");
        &self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        assert!((1..=self.n).contains(&i) && (1..=self.n).contains(&j), "index ({i}, {j}) out of range");
        self.entries[(i - 1) * self.n + (j - 1)] = v;
    }

    #[inline]
    pub fn at(&self, i0: usize, j0: usize) -> &Rational {
        &self.entries[i0 * self.n + j0]
    }

    pub fn row(&self, i0: usize) -> &[Rational] {
        &self.entries[i0 * self.n..(i0 + 1) * self.n]
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.entries[j * n + i] = self.entries[i * n + j].clone();
            }
        }
        m
    }

    pub fn scale(&self, s: &Rational) -> Self {
        RationalMatrix { n: self.n, entries: self.entries.iter().map(|x| x * s).collect() }
    }

    /// Block-diagonal `diag(self, other)`.
    pub fn direct_sum(&self, other: &RationalMatrix) -> Self {
        let n = self.n + other.n;
        let mut m = Self::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.entries[i * n + j] = self.at(i, j).clone();
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                m.entries[(i + self.n) * n + j + self.n] = other.at(i, j).clone();
            }
        }
        m
    }

    /// Parses the matrix file format: `n` on the first line, then `n` rows of `n` rationals.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let n: usize = header.parse().map_err(|_| Error::Parse(format!("bad dimension line `{header}`")))?;
        if n == 0 {
            return Err(Error::Parse("dimension must be at least 1".into()));
        }
        let mut rows = Vec::with_capacity(n);
        for r in 0..n {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("expected {n} rows, found {r}")))?;
            let row = line.split_whitespace().map(parse_rational).collect::<Result<Vec<_>>>()?;
            if row.len() != n {
                return Err(Error::Parse(format!("row {} has {} entries, expected {n}", r + 1, row.len())));
            }
            rows.push(row);
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!("trailing content `{extra}`")));
        }
        Self::from_rows(rows)
    }

    pub fn to_file_string(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::frac;

    #[test]
    fn file_round_trip() {
        let m = RationalMatrix::parse("2\n1 -3/2\n0 7\n").unwrap();
        assert_eq!(m.get(1, 2), &frac(-3, 2));
        assert_eq!(RationalMatrix::parse(&m.to_string()).unwrap(), m);
        assert!(RationalMatrix::parse("2\n1 2\n3\n").is_err());
        assert!(RationalMatrix::parse("2\n1 2\n3 4\n5 6\n").is_err());
    }

    #[test]
    fn direct_sum_layout() {
        let a = RationalMatrix::from_i64(&[&[1, 2], &[3, 4]]).unwrap();
        let b = RationalMatrix::from_i64(&[&[5]]).unwrap();
        let c = a.direct_sum(&b);
        assert_eq!(c.n(), 3);
        assert_eq!(c.get(3, 3), &crate::algebra::int(5));
        assert!(c.get(1, 3).is_zero() && c.get(3, 2).is_zero());
    }
}

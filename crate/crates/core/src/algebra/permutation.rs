use std::fmt;

use super::{Cap, Partition};
use crate::{Error, Result};

/// Element of S_n. Public accessors are 1-based; `images0` exposes the 0-based table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// Builds from 1-based images, e.g. `[2, 3, 1]` is the 3-cycle 1→2→3→1.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &v in images {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection on 1..={n}")));
            }
            seen[v - 1] = true;
            out.push(v - 1);
        }
        Ok(Permutation { images: out })
    }

    pub(crate) fn from_images0(images: Vec<usize>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &v)| i == v)
        });
        Permutation { images }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// Image of `i` (1-based in, 1-based out).
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1] + 1
    }

    pub fn images0(&self) -> &[usize] {
        &self.images
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut lens = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
                len += 1;
            }
            lens.push(len);
        }
        lens
    }

    pub fn cycle_count(&self) -> usize {
        self.cycle_lengths().len()
    }

    pub fn cycle_type(&self) -> Partition {
        Partition::from_unsorted(self.cycle_lengths())
    }

    /// +1 or -1.
    pub fn sign(&self) -> i32 {
        if (self.n() - self.cycle_count()) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn compose(&self, other: &Permutation) -> Permutation {
        // (self ∘ other)(i) = self(other(i))
        Permutation { images: other.images.iter().map(|&j| self.images[j]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|v| (v + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Lexicographic iterator over S_n, starting at the identity.
pub struct Permutations {
    next: Option<Vec<usize>>,
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        if next_lex(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation { images: cur })
    }
}

fn next_lex(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// All of S_n in lexicographic order of image tables; refuses `n > cap`.
pub fn permutations(n: usize, cap: Cap) -> Result<Permutations> {
    cap.check(n, "permutation enumeration")?;
    Ok(Permutations { next: Some((0..n).collect()) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(images: &[usize]) -> Permutation {
        Permutation::from_images(images).unwrap()
    }

    #[test]
    fn cycle_statistics() {
        assert_eq!(Permutation::identity(5).cycle_count(), 5);
        assert_eq!(p(&[2, 3, 1]).cycle_count(), 1);
        assert_eq!(p(&[2, 1, 4, 3]).cycle_count(), 2);
        assert_eq!(Permutation::identity(4).cycle_type().parts(), &[1, 1, 1, 1]);
        assert_eq!(p(&[2, 1, 4, 3]).cycle_type().parts(), &[2, 2]);
        assert_eq!(p(&[2, 3, 4, 1]).cycle_type().parts(), &[4]);
        assert_eq!(Permutation::identity(3).sign(), 1);
        assert_eq!(p(&[2, 1, 3]).sign(), -1);
        assert_eq!(p(&[2, 3, 1]).sign(), 1);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(&[1, 1]).is_err());
        assert!(Permutation::from_images(&[0, 1]).is_err());
        assert!(Permutation::from_images(&[3, 1]).is_err());
    }

    #[test]
    fn enumeration() {
        let one: Vec<_> = permutations(1, Cap::default()).unwrap().collect();
        assert_eq!(one, vec![Permutation::identity(1)]);
        let three: Vec<_> = permutations(3, Cap::default()).unwrap().collect();
        assert_eq!(three.len(), 6);
        assert_eq!(three[0], Permutation::identity(3));
        assert!(three.windows(2).all(|w| w[0] < w[1]));
        let mut four: Vec<_> = permutations(4, Cap::default()).unwrap().collect();
        four.dedup();
        assert_eq!(four.len(), 24);
        assert_eq!(permutations(0, Cap::default()).unwrap().count(), 1);
        let err = permutations(10, Cap::default()).err().unwrap();
        assert!(err.to_string().contains("enumeration too large"));
        assert_eq!(permutations(10, Cap(10)).unwrap().take(3).count(), 3);
    }

    #[test]
    fn compose_and_inverse() {
        let a = p(&[2, 3, 1]);
        assert_eq!(a.compose(&a.inverse()), Permutation::identity(3));
        assert_eq!(a.image(3), 1);
    }
}

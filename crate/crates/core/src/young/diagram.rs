use std::fmt;

use crate::algebra::Partition;
use crate::Result;

/// Left-justified rows of boxes; `rows` holds the row lengths.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct YoungDiagram {
    rows: Partition,
}

impl YoungDiagram {
    pub fn new(rows: Partition) -> Self {
        YoungDiagram { rows }
    }

    pub fn from_rows(rows: &[usize]) -> Result<Self> {
        Ok(YoungDiagram { rows: Partition::new(rows.to_vec())? })
    }

    /// Builds from column lengths, e.g. `[l1, l2]` for a two-column shape; zero columns are dropped.
    pub fn from_columns(cols: &[usize]) -> Result<Self> {
        let cols: Vec<usize> = cols.iter().copied().filter(|&c| c > 0).collect();
        Ok(YoungDiagram { rows: Partition::new(cols)?.conjugate() })
    }

    /// Comma-separated row lengths, e.g. `4,4,2,1`.
    pub fn parse(text: &str) -> Result<Self> {
        Ok(YoungDiagram { rows: Partition::parse(text)? })
    }

    pub fn rows(&self) -> &[usize] {
        self.rows.parts()
    }

    pub fn partition(&self) -> &Partition {
        &self.rows
    }

    pub fn columns(&self) -> Vec<usize> {
        self.rows.conjugate().parts().to_vec()
    }

    pub fn weight(&self) -> usize {
        self.rows.weight()
    }

    pub fn column_count(&self) -> usize {
        self.rows().first().copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rows)
    }
}

/// A border strip: connected, contains no 2×2 square, and leaves a diagram when removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewHook {
    /// Removed cells as 1-based `(row, column)`.
    pub cells: Vec<(usize, usize)>,
    /// Rows spanned minus one.
    pub height: usize,
    pub remainder: YoungDiagram,
}

/// All border strips of `size` cells, found through the beta-set (abacus) description.
pub fn skew_hooks(y: &YoungDiagram, size: usize) -> Vec<SkewHook> {
    let rows = y.rows();
    let len = rows.len();
    if size == 0 {
        return Vec::new();
    }
    let beta: Vec<usize> = rows.iter().enumerate().map(|(i, &r)| r + len - 1 - i).collect();
    let mut out = Vec::new();
    for i in 0..len {
        let b = beta[i];
        if b < size || beta.contains(&(b - size)) {
            continue;
        }
        let target = b - size;
        let height = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut nb = beta.clone();
        nb[i] = target;
        nb.sort_unstable_by(|a, b| b.cmp(a));
        let new_rows: Vec<usize> = nb.iter().enumerate().map(|(j, &x)| x + j + 1 - len).collect();
        let mut cells = Vec::with_capacity(size);
        for r in 0..len {
            for c in new_rows[r]..rows[r] {
                cells.push((r + 1, c + 1));
            }
        }
        out.push(SkewHook { cells, height, remainder: YoungDiagram { rows: Partition::from_unsorted(new_rows) } });
    }
    out.sort_by(|a, b| b.remainder.cmp(&a.remainder));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_round_trip() {
        let y = YoungDiagram::from_columns(&[3, 1]).unwrap();
        assert_eq!(y.rows(), &[2, 1, 1]);
        assert_eq!(y.columns(), vec![3, 1]);
        assert_eq!(y.column_count(), 2);
        assert_eq!(YoungDiagram::from_columns(&[4, 0]).unwrap().rows(), &[1, 1, 1, 1]);
    }

    #[test]
    fn hooks_of_small_shapes() {
        let row = YoungDiagram::from_rows(&[5]).unwrap();
        let h = skew_hooks(&row, 5);
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].height, 0);
        assert!(h[0].remainder.is_empty());

        let hook = YoungDiagram::from_rows(&[2, 1]).unwrap();
        let h = skew_hooks(&hook, 3);
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].height, 1);
        assert_eq!(skew_hooks(&hook, 2).len(), 0);
        assert_eq!(skew_hooks(&hook, 1).len(), 2);
    }

    #[test]
    fn cells_form_connected_strip() {
        let y = YoungDiagram::from_rows(&[4, 3, 3, 1]).unwrap();
        for size in 1..=y.weight() {
            for h in skew_hooks(&y, size) {
                assert_eq!(h.cells.len(), size);
                assert_eq!(h.remainder.weight() + size, y.weight());
                let rows: std::collections::BTreeSet<usize> = h.cells.iter().map(|c| c.0).collect();
                assert_eq!(rows.len(), h.height + 1);
                for &(r, c) in &h.cells {
                    assert!(!h.cells.contains(&(r + 1, c + 1)) || !h.cells.contains(&(r, c + 1)) || !h.cells.contains(&(r + 1, c)));
                }
            }
        }
    }
}

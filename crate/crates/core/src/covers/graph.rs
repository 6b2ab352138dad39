use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::algebra::{parse_rational, Rational, RationalMatrix};
use crate::{Error, Result};

/// Directed graph on vertices `1..=n` with one optional rational weight per ordered pair.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WeightedDigraph {
    n: usize,
    edges: BTreeMap<(usize, usize), Rational>,
}

impl WeightedDigraph {
    pub fn new(n: usize) -> Self {
        WeightedDigraph { n, edges: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.n {
            return Err(Error::VertexOutOfRange(v, self.n));
        }
        Ok(())
    }

    /// Adds a new edge; an existing edge on the same ordered pair is an error.
    pub fn add_edge(&mut self, u: usize, v: usize, w: Rational) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if self.edges.contains_key(&(u, v)) {
            return Err(Error::DuplicateEdge(u, v));
        }
        self.edges.insert((u, v), w);
        Ok(())
    }

    /// Inserts or overwrites.
    pub fn set_edge(&mut self, u: usize, v: usize, w: Rational) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        self.edges.insert((u, v), w);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<Rational> {
        self.edges.remove(&(u, v)).ok_or(Error::MissingEdge(u, v))
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<&Rational> {
        self.edges.get(&(u, v))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains_key(&(u, v))
    }

    /// Edges in lexicographic order of `(u, v)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.edges.iter().map(|(&(u, v), w)| (u, v, w))
    }

    pub fn out_edges(&self, u: usize) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.edges.range((u, 0)..=(u, usize::MAX)).map(|(&(_, v), w)| (v, w))
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out_edges(u).count()
    }

    /// Appends `count` isolated vertices and returns the index of the first one.
    pub fn add_vertices(&mut self, count: usize) -> usize {
        let first = self.n + 1;
        self.n += count;
        first
    }

    /// Graph of a matrix: edge (i, j) for every nonzero entry.
    pub fn from_matrix(a: &RationalMatrix) -> Self {
        Self::from_matrix_impl(a, false)
    }

    /// Graph of a matrix with all n² edges, zero entries included.
    pub fn from_matrix_with_zeros(a: &RationalMatrix) -> Self {
        Self::from_matrix_impl(a, true)
    }

    fn from_matrix_impl(a: &RationalMatrix, keep_zeros: bool) -> Self {
        let mut g = WeightedDigraph::new(a.n());
        for i in 0..a.n() {
            for j in 0..a.n() {
                let w = a.at(i, j);
                if keep_zeros || !w.is_zero() {
                    g.edges.insert((i + 1, j + 1), w.clone());
                }
            }
        }
        g
    }

    /// Adjacency matrix; absent edges become 0. Panics on the empty graph.
    pub fn adjacency_matrix(&self) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.n);
        for (&(u, v), w) in &self.edges {
            m.set(u, v, w.clone());
        }
        m
    }

    pub fn scaled(&self, s: &Rational) -> Self {
        WeightedDigraph { n: self.n, edges: self.edges.iter().map(|(&e, w)| (e, w * s)).collect() }
    }

    /// Keeps, among the out-edges of `u`, only the one to `v`.
    pub fn restrict_successor(&mut self, u: usize, v: usize) -> Result<()> {
        if !self.has_edge(u, v) {
            return Err(Error::MissingEdge(u, v));
        }
        let drop: Vec<usize> = self.out_edges(u).map(|(t, _)| t).filter(|&t| t != v).collect();
        for t in drop {
            self.edges.remove(&(u, t));
        }
        Ok(())
    }

    /// Parses the graph file format: `n m`, then `m` lines `u v weight`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty graph file".into()))?;
        let nums: Vec<&str> = header.split_whitespace().collect();
        let (n, m) = match nums.as_slice() {
            [a, b] => (
                a.parse::<usize>().map_err(|_| Error::Parse(format!("bad header `{header}`")))?,
                b.parse::<usize>().map_err(|_| Error::Parse(format!("bad header `{header}`")))?,
            ),
            _ => return Err(Error::Parse(format!("bad header `{header}`"))),
        };
        let mut g = WeightedDigraph::new(n);
        for r in 0..m {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("expected {m} edges, found {r}")))?;
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(Error::Parse(format!("bad edge line `{line}`")));
            }
            let u = f[0].parse::<usize>().map_err(|_| Error::Parse(format!("bad vertex in `{line}`")))?;
            let v = f[1].parse::<usize>().map_err(|_| Error::Parse(format!("bad vertex in `{line}`")))?;
            let w = parse_rational(f[2])?;
            g.add_edge(u, v, w).map_err(|e| Error::Parse(format!("line `{line}`: {e}")))?;
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!("trailing content `{extra}`")));
        }
        Ok(g)
    }
}

impl fmt::Display for WeightedDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.edges.len())?;
        for (&(u, v), w) in &self.edges {
            writeln!(f, "{u} {v} {w}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{frac, int};

    #[test]
    fn file_round_trip() {
        let g = WeightedDigraph::parse("3 3\n1 2 1/2\n2 3 -4\n3 3 1\n").unwrap();
        assert_eq!(g.weight(1, 2), Some(&frac(1, 2)));
        assert_eq!(WeightedDigraph::parse(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn format_errors() {
        assert!(WeightedDigraph::parse("2 2\n1 2 1\n1 2 3\n").is_err());
        assert!(WeightedDigraph::parse("2 1\n1 3 1\n").is_err());
        assert!(WeightedDigraph::parse("2 2\n1 2 1\n").is_err());
        assert!(WeightedDigraph::parse("2 1\n0 1 1\n").is_err());
    }

    #[test]
    fn matrix_conversion_drops_zeros_by_default() {
        let a = RationalMatrix::from_i64(&[&[0, 2], &[3, 0]]).unwrap();
        assert_eq!(WeightedDigraph::from_matrix(&a).edge_count(), 2);
        assert_eq!(WeightedDigraph::from_matrix_with_zeros(&a).edge_count(), 4);
        assert_eq!(WeightedDigraph::from_matrix(&a).adjacency_matrix(), a);
    }

    #[test]
    fn restriction() {
        let mut g = WeightedDigraph::new(2);
        for (u, v) in [(1, 1), (1, 2), (2, 1)] {
            g.add_edge(u, v, int(1)).unwrap();
        }
        g.restrict_successor(1, 2).unwrap();
        assert!(!g.has_edge(1, 1) && g.has_edge(1, 2) && g.has_edge(2, 1));
        assert!(g.restrict_successor(2, 2).is_err());
    }
}

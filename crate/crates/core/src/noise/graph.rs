use alloc::format;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};

/// Undirected graph on `n` vertices; `(i, i)` is a loop.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GraphSpec {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl GraphSpec {
    /// Normalizes each edge to `(min, max)` and rejects duplicates.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut normalized: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::QubitOutOfRange { index: v, n });
                }
            }
            let e = (a.min(b), a.max(b));
            if normalized.contains(&e) {
                return Err(invalid(format!("duplicate edge {e:?}")));
            }
            normalized.push(e);
        }
        if normalized.is_empty() {
            return Err(invalid("graph has no edges"));
        }
        Ok(Self { n, edges: normalized })
    }

    pub fn complete_with_loops(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        Self { n, edges }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Self { n, edges }
    }

    pub fn line(n: usize) -> Self {
        Self { n, edges: (1..n).map(|i| (i - 1, i)).collect() }
    }

    pub fn ring(n: usize) -> Self {
        let mut g = Self::line(n);
        if n > 2 {
            g.edges.push((0, n - 1));
        }
        g
    }

    /// `rows x cols` lattice, vertex `r * cols + c`.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols));
                }
            }
        }
        Self { n: rows * cols, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders() {
        assert_eq!(GraphSpec::complete_with_loops(3).edges().len(), 6);
        assert_eq!(GraphSpec::complete(4).edges().len(), 6);
        assert_eq!(GraphSpec::ring(5).edges().len(), 5);
        assert_eq!(GraphSpec::grid(2, 3).edges().len(), 7);
    }

    #[test]
    fn validation() {
        assert!(GraphSpec::new(3, alloc::vec![(0, 1), (1, 0)]).is_err());
        assert!(GraphSpec::new(3, alloc::vec![(0, 3)]).is_err());
        let g = GraphSpec::new(3, alloc::vec![(2, 1), (1, 1)]).unwrap();
        assert_eq!(g.edges(), &[(1, 2), (1, 1)]);
    }
}

//! Labeled simple graphs stored as adjacency bit-rows.

use std::fmt;

use thiserror::Error;

use crate::matrix::IntMatrix;

/// Largest vertex count a [`Graph`] can hold: one row per `u32`.
pub const MAX_VERTICES: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has {n} vertices, at most {max} supported here")]
    TooLarge { n: usize, max: usize },
    #[error("not a permutation of 0..{n}: {reason}")]
    BadPermutation { n: usize, reason: String },
    #[error("vertex {v} out of range for a graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("adjacency rows are not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),
}

/// Number of edges of a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeCount(pub u16);

impl EdgeCount {
    pub fn get(self) -> usize {
        self.0 as usize
    }

    /// Edge count of the complete graph on `n` vertices.
    pub fn max_for(n: usize) -> EdgeCount {
        EdgeCount((n * n.saturating_sub(1) / 2) as u16)
    }
}

impl fmt::Display for EdgeCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A simple undirected graph on `n <= 32` vertices.
///
/// Row `i` holds the neighbourhood of vertex `i` as a bit set. Rows at
/// index `>= n` and bits at position `>= n` are always zero, so the derived
/// `Eq`/`Hash`/`Ord` compare labeled graphs exactly.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: u8,
    rows: [u32; MAX_VERTICES],
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Graph, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooLarge {
                n,
                max: MAX_VERTICES,
            });
        }
        Ok(Graph {
            n: n as u8,
            rows: [0; MAX_VERTICES],
        })
    }

    pub fn complete(n: usize) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(n)?;
        let full = low_mask(n);
        for i in 0..n {
            g.rows[i] = full & !(1 << i);
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(n)?;
        for i in 1..n {
            g.add_edge(i - 1, i)?;
        }
        Ok(g)
    }

    pub fn cycle(n: usize) -> Result<Graph, GraphError> {
        let mut g = Graph::path(n)?;
        if n >= 3 {
            g.add_edge(n - 1, 0)?;
        }
        Ok(g)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Builds a graph from raw rows, checking every representation invariant.
    pub fn from_rows(n: usize, rows: &[u32]) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(n)?;
        if rows.len() != n {
            return Err(GraphError::VertexOutOfRange { v: rows.len(), n });
        }
        let mask = low_mask(n);
        for (i, &r) in rows.iter().enumerate() {
            if r & !mask != 0 {
                return Err(GraphError::VertexOutOfRange {
                    v: 31 - (r & !mask).leading_zeros() as usize,
                    n,
                });
            }
            if r >> i & 1 == 1 {
                return Err(GraphError::Loop(i));
            }
            g.rows[i] = r;
        }
        for i in 0..n {
            for j in 0..n {
                if g.has_edge(i, j) != g.has_edge(j, i) {
                    return Err(GraphError::Asymmetric(i, j));
                }
            }
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn row(&self, v: usize) -> u32 {
        self.rows[v]
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows[..self.n()]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u] >> v & 1 == 1
    }

    #[inline]
    pub fn degree(&self, v: usize) -> u32 {
        self.rows[v].count_ones()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.n();
        for w in [u, v] {
            if w >= n {
                return Err(GraphError::VertexOutOfRange { v: w, n });
            }
        }
        if u == v {
            return Err(GraphError::Loop(u));
        }
        self.rows[u] |= 1 << v;
        self.rows[v] |= 1 << u;
        Ok(())
    }

    /// Unchecked edge insertion for hot loops that already validated `u`, `v`.
    #[inline]
    pub(crate) fn set_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n() && v < self.n());
        self.rows[u] |= 1 << v;
        self.rows[v] |= 1 << u;
    }

    /// Appends a vertex adjacent to exactly the vertices in `neighbours`.
    pub(crate) fn with_new_vertex(&self, neighbours: u32) -> Graph {
        let n = self.n();
        debug_assert!(n < MAX_VERTICES && neighbours & !low_mask(n) == 0);
        let mut g = *self;
        g.n += 1;
        g.rows[n] = neighbours;
        let mut rest = neighbours;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            g.rows[u] |= 1 << n;
            rest &= rest - 1;
        }
        g
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |i| {
            ((i + 1)..self.n())
                .filter(move |&j| self.has_edge(i, j))
                .map(move |j| (i, j))
        })
    }

    pub fn edge_count(&self) -> EdgeCount {
        let total: u32 = self.rows().iter().map(|r| r.count_ones()).sum();
        EdgeCount((total / 2) as u16)
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let mask = low_mask(n);
        let mut g = *self;
        for i in 0..n {
            g.rows[i] = !self.rows[i] & mask & !(1 << i);
        }
        g
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph, GraphError> {
        let shift = self.n();
        let mut g = Graph::empty(shift + other.n())?;
        g.rows[..shift].copy_from_slice(self.rows());
        for (i, &r) in other.rows().iter().enumerate() {
            g.rows[shift + i] = r << shift;
        }
        Ok(g)
    }

    /// Relabels vertices: vertex `i` of `self` becomes `sigma[i]`.
    pub fn permute(&self, sigma: &[usize]) -> Result<Graph, GraphError> {
        let n = self.n();
        check_permutation(n, sigma)?;
        Ok(self.relabel(sigma))
    }

    pub(crate) fn relabel(&self, sigma: &[usize]) -> Graph {
        let mut g = Graph {
            n: self.n,
            rows: [0; MAX_VERTICES],
        };
        for i in 0..self.n() {
            let mut rest = self.rows[i];
            let mut r = 0u32;
            while rest != 0 {
                let j = rest.trailing_zeros() as usize;
                r |= 1 << sigma[j];
                rest &= rest - 1;
            }
            g.rows[sigma[i]] = r;
        }
        g
    }

    /// The characteristic matrix `t*I - A` evaluated at an integer `t`.
    pub fn adjacency_char_matrix(&self, t: i64) -> IntMatrix {
        let n = self.n();
        IntMatrix::from_fn(n, |i, j| {
            if i == j {
                t
            } else if self.has_edge(i, j) {
                -1
            } else {
                0
            }
        })
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=", self.n)?;
        f.debug_list().entries(self.edges()).finish()?;
        write!(f, ")")
    }
}

pub fn edge_count(g: &Graph) -> EdgeCount {
    g.edge_count()
}

pub fn permute(g: &Graph, sigma: &[usize]) -> Result<Graph, GraphError> {
    g.permute(sigma)
}

pub fn adjacency_char_matrix(g: &Graph, t: i64) -> IntMatrix {
    g.adjacency_char_matrix(t)
}

pub(crate) fn check_permutation(n: usize, sigma: &[usize]) -> Result<(), GraphError> {
    if sigma.len() != n {
        return Err(GraphError::BadPermutation {
            n,
            reason: format!("length {} != {n}", sigma.len()),
        });
    }
    let mut seen = 0u64;
    for &s in sigma {
        if s >= n {
            return Err(GraphError::BadPermutation {
                n,
                reason: format!("image {s} out of range"),
            });
        }
        if seen >> s & 1 == 1 {
            return Err(GraphError::BadPermutation {
                n,
                reason: format!("image {s} repeated"),
            });
        }
        seen |= 1 << s;
    }
    Ok(())
}

#[inline]
pub(crate) fn low_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

//! Canonical labeling for small graphs.
//!
//! The canonical form is the relabeling with the least upper-triangle bit
//! string (graph6 bit order, first bit most significant) among all leaves of
//! an individualization-refinement search tree. Cells are refined to an
//! equitable partition and split in an order that depends only on neighbour
//! counts, so the set of leaves is labeling-invariant. Subtrees are pruned
//! with automorphisms discovered at leaves; those automorphisms generate the
//! full automorphism group, which gives the vertex orbits as a by-product.

use crate::graph::{Graph, GraphError};

/// Largest `n` for which the adjacency key fits a `u64`.
pub const CANON_MAX_N: usize = 11;

/// Ordered partition of the vertex set, each cell a bit mask.
#[derive(Clone, Copy)]
struct Partition {
    cells: [u32; CANON_MAX_N],
    len: usize,
}

impl Partition {
    fn unit(n: usize) -> Partition {
        let mut cells = [0; CANON_MAX_N];
        let len = if n == 0 {
            0
        } else {
            cells[0] = (1u32 << n) - 1;
            1
        };
        Partition { cells, len }
    }

    fn cells(&self) -> &[u32] {
        &self.cells[..self.len]
    }

    fn is_discrete(&self, n: usize) -> bool {
        self.len == n
    }

    /// Splits every cell by the number of neighbours in each splitter cell
    /// until nothing changes. Fragments are ordered by ascending count and
    /// stay where their parent cell was.
    fn refine(&mut self, g: &Graph) {
        let mut s = 0;
        let mut stable_run = 0;
        while stable_run < self.len {
            let splitter = self.cells[s];
            let mut out = [0u32; CANON_MAX_N];
            let mut out_len = 0;
            let mut changed = false;
            for &cell in self.cells() {
                if cell & (cell - 1) == 0 {
                    out[out_len] = cell;
                    out_len += 1;
                    continue;
                }
                let mut buckets = [0u32; CANON_MAX_N + 1];
                let (mut lo, mut hi) = (usize::MAX, 0);
                let mut rest = cell;
                while rest != 0 {
                    let v = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    let c = (g.row(v) & splitter).count_ones() as usize;
                    buckets[c] |= 1 << v;
                    lo = lo.min(c);
                    hi = hi.max(c);
                }
                if lo != hi {
                    changed = true;
                }
                for &b in &buckets[lo..=hi] {
                    if b != 0 {
                        out[out_len] = b;
                        out_len += 1;
                    }
                }
            }
            if changed {
                self.cells = out;
                self.len = out_len;
                stable_run = 0;
                s = 0;
            } else {
                stable_run += 1;
                s = (s + 1) % self.len;
            }
        }
    }

    /// Moves `v` into its own cell in front of the rest of cell `idx`.
    fn individualize(&self, idx: usize, v: usize) -> Partition {
        let mut p = Partition {
            cells: [0; CANON_MAX_N],
            len: self.len + 1,
        };
        p.cells[..idx].copy_from_slice(&self.cells[..idx]);
        p.cells[idx] = 1 << v;
        p.cells[idx + 1] = self.cells[idx] & !(1 << v);
        p.cells[idx + 2..=self.len].copy_from_slice(&self.cells[idx + 1..self.len]);
        p
    }
}

/// Result of canonical labeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical {
    /// The canonically relabeled graph.
    pub graph: Graph,
    /// Upper-triangle bit string of `graph`, first bit most significant.
    pub key: u64,
    /// `order[p]` is the input vertex placed at position `p`.
    pub order: Vec<usize>,
    /// `orbits[v]` is the least vertex in the automorphism orbit of `v`.
    pub orbits: Vec<usize>,
}

impl Canonical {
    pub fn same_orbit(&self, u: usize, v: usize) -> bool {
        self.orbits[u] == self.orbits[v]
    }
}

struct Leaf {
    order: [u8; CANON_MAX_N],
    key: u64,
}

struct Search<'a> {
    g: &'a Graph,
    n: usize,
    first: Option<Leaf>,
    best: Option<Leaf>,
    /// Automorphisms as image arrays.
    generators: Vec<[u8; CANON_MAX_N]>,
    path: Vec<usize>,
    /// Individualized vertices leading to the first leaf.
    first_path: Vec<usize>,
}

fn leaf_key(g: &Graph, order: &[u8]) -> u64 {
    let mut key = 0u64;
    for j in 1..order.len() {
        let row = g.row(order[j] as usize);
        for &vi in &order[..j] {
            key = key << 1 | (row >> vi & 1) as u64;
        }
    }
    key
}

fn find(parent: &mut [u8; CANON_MAX_N], mut v: usize) -> usize {
    while parent[v] as usize != v {
        parent[v] = parent[parent[v] as usize];
        v = parent[v] as usize;
    }
    v
}

fn union(parent: &mut [u8; CANON_MAX_N], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi] = lo as u8;
    }
}

impl Search<'_> {
    fn orbits_fixing(&self, fixed: &[usize]) -> [u8; CANON_MAX_N] {
        let mut parent = [0u8; CANON_MAX_N];
        for (v, p) in parent.iter_mut().enumerate().take(self.n) {
            *p = v as u8;
        }
        for gamma in &self.generators {
            if fixed.iter().all(|&v| gamma[v] as usize == v) {
                for v in 0..self.n {
                    union(&mut parent, v, gamma[v] as usize);
                }
            }
        }
        parent
    }

    fn record_automorphism(&mut self, from: &[u8; CANON_MAX_N], to: &[u8; CANON_MAX_N]) {
        let mut gamma = [0u8; CANON_MAX_N];
        for p in 0..self.n {
            gamma[from[p] as usize] = to[p];
        }
        if (0..self.n).any(|v| gamma[v] as usize != v) {
            self.generators.push(gamma);
        }
    }

    /// Explores the subtree under `part` at depth `path.len()`. Returns
    /// `Some(level)` to abandon every node deeper than `level`.
    fn explore(&mut self, part: Partition) -> Option<usize> {
        let depth = self.path.len();
        if part.is_discrete(self.n) {
            return self.visit_leaf(&part);
        }
        let (idx, &target) = part
            .cells()
            .iter()
            .enumerate()
            .find(|(_, c)| c.count_ones() > 1)
            .expect("non-discrete");
        let mut explored = 0u32;
        let mut rest = target;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if explored != 0 {
                let mut parent = self.orbits_fixing(&self.path);
                let root = find(&mut parent, v);
                let mut seen = explored;
                let mut pruned = false;
                while seen != 0 {
                    let u = seen.trailing_zeros() as usize;
                    seen &= seen - 1;
                    if find(&mut parent, u) == root {
                        pruned = true;
                        break;
                    }
                }
                if pruned {
                    continue;
                }
            }
            explored |= 1 << v;
            let mut child = part.individualize(idx, v);
            child.refine(self.g);
            self.path.push(v);
            if self.first.is_none() {
                self.first_path.push(v);
            }
            let jump = self.explore(child);
            self.path.pop();
            if let Some(level) = jump {
                if level < depth {
                    return Some(level);
                }
            }
        }
        None
    }

    fn visit_leaf(&mut self, part: &Partition) -> Option<usize> {
        let mut order = [0u8; CANON_MAX_N];
        for (p, &cell) in part.cells().iter().enumerate() {
            order[p] = cell.trailing_zeros() as u8;
        }
        let key = leaf_key(self.g, &order[..self.n]);
        let leaf = Leaf { order, key };

        let Some(first) = &self.first else {
            self.first = Some(Leaf { order, key });
            self.best = Some(leaf);
            return None;
        };
        if key == first.key {
            let from = first.order;
            self.record_automorphism(&from, &order);
            // this leaf's subtree, from where it left the first path, is an
            // automorphic image of an already explored one
            let shared = self
                .path
                .iter()
                .zip(&self.first_path)
                .take_while(|(a, b)| a == b)
                .count();
            return Some(shared);
        }
        let best = self.best.as_ref().expect("set with first");
        if key == best.key {
            let from = best.order;
            self.record_automorphism(&from, &order);
        } else if key < best.key {
            self.best = Some(leaf);
        }
        None
    }
}

pub fn canonical_labeling(g: &Graph) -> Result<Canonical, GraphError> {
    let n = g.n();
    if n > CANON_MAX_N {
        return Err(GraphError::TooLarge {
            n,
            max: CANON_MAX_N,
        });
    }
    let mut root = Partition::unit(n);
    root.refine(g);
    let mut search = Search {
        g,
        n,
        first: None,
        best: None,
        generators: Vec::new(),
        path: Vec::new(),
        first_path: Vec::new(),
    };
    if n == 0 {
        return Ok(Canonical {
            graph: *g,
            key: 0,
            order: Vec::new(),
            orbits: Vec::new(),
        });
    }
    search.explore(root);

    let best = search.best.as_ref().expect("at least one leaf");
    let order: Vec<usize> = best.order[..n].iter().map(|&v| v as usize).collect();
    let mut position = vec![0usize; n];
    for (p, &v) in order.iter().enumerate() {
        position[v] = p;
    }
    let graph = g.relabel(&position);
    let mut parent = search.orbits_fixing(&[]);
    let orbits = (0..n).map(|v| find(&mut parent, v)).collect();
    Ok(Canonical {
        graph,
        key: best.key,
        order,
        orbits,
    })
}

pub fn canonical_form(g: &Graph) -> Result<Graph, GraphError> {
    Ok(canonical_labeling(g)?.graph)
}

/// Last cell of the refined unit partition. The vertex a canonical
/// labeling puts last always lies in it.
pub(crate) fn last_root_cell(g: &Graph) -> u32 {
    let mut root = Partition::unit(g.n());
    root.refine(g);
    root.cells().last().copied().unwrap_or(0)
}

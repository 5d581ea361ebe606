//! Isomorph-free generation of all graphs on `n` vertices, and graph6 ingest.
//!
//! Generation is by canonical augmentation: a graph on `k + 1` vertices is
//! built from a graph on `k` vertices by adding a vertex with every possible
//! neighbourhood, and kept only if the new vertex lies in the automorphism
//! orbit of the vertex that the canonical labeling puts last. That makes the
//! parent of every isomorphism class unique; children of one parent that
//! are isomorphic to each other are merged by canonical key.

use std::collections::HashSet;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Lines, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::canon::{canonical_labeling, last_root_cell};
use crate::graph::{EdgeCount, Graph};
use crate::graph6::{parse_graph6, to_graph6, Graph6Error};

/// Largest `n` the builtin generator accepts; feed larger runs from a file.
pub const BUILTIN_MAX_N: usize = 9;

#[derive(Debug, Error)]
pub enum EnumError {
    #[error("builtin generation supports n <= {max}, got n = {n}; ingest a graph6 file instead")]
    TooLarge { n: usize, max: usize },
    #[error("no graph on {n} vertices has {m} edges")]
    EdgesOutOfRange { n: usize, m: EdgeCount },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("line {line}: {source}")]
    Decode { line: usize, source: Graph6Error },
    #[error("expected {expected} graphs, stream ended after {found}")]
    CountMismatch { expected: u64, found: u64 },
}

/// Where a [`GraphStream`] gets its graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSource {
    Builtin { n: usize, m: Option<EdgeCount> },
    FileIngest(PathBuf),
}

enum Inner {
    Builtin(std::vec::IntoIter<Graph>),
    Ingest {
        lines: Lines<BufReader<File>>,
        line: usize,
    },
}

/// A single-consumer stream of graphs. Builtin streams hold one graph per
/// isomorphism class; ingest streams decode lines verbatim, in file order.
pub struct GraphStream {
    source: GraphSource,
    count_hint: Option<u64>,
    inner: Inner,
    yielded: u64,
    finished: bool,
}

impl GraphStream {
    pub fn source(&self) -> &GraphSource {
        &self.source
    }

    /// Makes end-of-stream an error unless exactly `expected` graphs came out.
    pub fn with_count_hint(mut self, expected: u64) -> GraphStream {
        self.count_hint = Some(expected);
        self
    }

    fn builtin(n: usize, m: Option<EdgeCount>, graphs: Vec<Graph>) -> GraphStream {
        GraphStream {
            source: GraphSource::Builtin { n, m },
            count_hint: None,
            inner: Inner::Builtin(graphs.into_iter()),
            yielded: 0,
            finished: false,
        }
    }
}

impl Iterator for GraphStream {
    type Item = Result<Graph, EnumError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.finished {
            return None;
        }
        let item = match &mut self.inner {
            Inner::Builtin(it) => it.next().map(Ok),
            Inner::Ingest { lines, line } => loop {
                let Some(next) = lines.next() else { break None };
                *line += 1;
                let text = match next {
                    Ok(text) => text,
                    Err(source) => {
                        let path = match &self.source {
                            GraphSource::FileIngest(p) => p.clone(),
                            GraphSource::Builtin { .. } => PathBuf::new(),
                        };
                        break Some(Err(EnumError::Io { path, source }));
                    }
                };
                let text = text.strip_suffix('\r').unwrap_or(&text);
                if text.is_empty() {
                    continue;
                }
                break Some(parse_graph6(text).map_err(|source| EnumError::Decode {
                    line: *line,
                    source,
                }));
            },
        };
        match item {
            Some(Ok(g)) => {
                self.yielded += 1;
                Some(Ok(g))
            }
            Some(Err(e)) => {
                self.finished = true;
                Some(Err(e))
            }
            None => {
                self.finished = true;
                match self.count_hint {
                    Some(expected) if expected != self.yielded => {
                        Some(Err(EnumError::CountMismatch {
                            expected,
                            found: self.yielded,
                        }))
                    }
                    _ => None,
                }
            }
        }
    }
}

/// Children of `parent` kept by the canonical-augmentation rule, as
/// canonical forms. With `degree = Some(d)` only neighbourhoods of size `d`
/// are tried.
fn children(parent: &Graph, degree: Option<u32>) -> Vec<Graph> {
    let k = parent.n();
    let new = k;
    let max_parent_degree = parent
        .rows()
        .iter()
        .map(|r| r.count_ones())
        .max()
        .unwrap_or(0);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for subset in 0u32..(1u32 << k) {
        let d = subset.count_ones();
        if degree.is_some_and(|want| want != d) {
            continue;
        }
        // the canonically last vertex has maximum degree
        if d < max_parent_degree {
            continue;
        }
        let child = parent.with_new_vertex(subset);
        if last_root_cell(&child) >> new & 1 == 0 {
            continue;
        }
        let canon =
            canonical_labeling(&child).expect("builtin sizes are within the canonical bound");
        let last = canon.order[new];
        if !canon.same_orbit(last, new) {
            continue;
        }
        if seen.insert(canon.key) {
            out.push(canon.graph);
        }
    }
    out
}

fn extend(
    parents: &[Graph],
    degree_for: impl Fn(&Graph) -> Option<Option<u32>> + Sync,
) -> Vec<Graph> {
    parents
        .par_iter()
        .map(|p| match degree_for(p) {
            Some(degree) => children(p, degree),
            None => Vec::new(),
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// One representative per isomorphism class on `n` vertices, as canonical
/// forms, in a deterministic order.
fn level(n: usize) -> Vec<Graph> {
    let mut graphs = vec![Graph::empty(0).expect("n = 0")];
    for _ in 0..n {
        graphs = extend(&graphs, |_| Some(None));
    }
    graphs
}

/// Holds every class on `n - 1` vertices so that several edge-count shards
/// on `n` vertices can be produced without regenerating them.
pub struct Generator {
    n: usize,
    parents: Vec<Graph>,
}

impl Generator {
    pub fn new(n: usize) -> Result<Generator, EnumError> {
        if n > BUILTIN_MAX_N {
            return Err(EnumError::TooLarge {
                n,
                max: BUILTIN_MAX_N,
            });
        }
        let parents = if n == 0 { Vec::new() } else { level(n - 1) };
        Ok(Generator { n, parents })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn all(&self) -> Vec<Graph> {
        if self.n == 0 {
            return vec![Graph::empty(0).expect("n = 0")];
        }
        extend(&self.parents, |_| Some(None))
    }

    /// Classes with exactly `m` edges. Only parents with `m - n + 1 <= m' <= m`
    /// edges can contribute, each with a new vertex of degree `m - m'`.
    pub fn with_edges(&self, m: EdgeCount) -> Result<Vec<Graph>, EnumError> {
        if m > EdgeCount::max_for(self.n) {
            return Err(EnumError::EdgesOutOfRange { n: self.n, m });
        }
        if self.n == 0 {
            return Ok(vec![Graph::empty(0).expect("n = 0")]);
        }
        let k = self.n - 1;
        Ok(extend(&self.parents, |p| {
            let pm = p.edge_count().get();
            let want = m.get().checked_sub(pm)?;
            (want <= k).then_some(Some(want as u32))
        }))
    }
}

pub fn enumerate_graphs(n: usize) -> Result<GraphStream, EnumError> {
    let graphs = Generator::new(n)?.all();
    Ok(GraphStream::builtin(n, None, graphs))
}

pub fn enumerate_by_edges(n: usize, m: EdgeCount) -> Result<GraphStream, EnumError> {
    let graphs = Generator::new(n)?.with_edges(m)?;
    Ok(GraphStream::builtin(n, Some(m), graphs))
}

pub fn ingest_graph6(path: impl AsRef<Path>) -> Result<GraphStream, EnumError> {
    let path = path.as_ref().to_path_buf();
    let file = File::open(&path).map_err(|source| EnumError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(GraphStream {
        source: GraphSource::FileIngest(path),
        count_hint: None,
        inner: Inner::Ingest {
            lines: BufReader::new(file).lines(),
            line: 0,
        },
        yielded: 0,
        finished: false,
    })
}

/// Writes one graph6 line per graph; returns how many were written.
pub fn write_graph6<W: Write>(
    graphs: impl IntoIterator<Item = Graph>,
    mut out: W,
) -> io::Result<u64> {
    let mut count = 0;
    for g in graphs {
        writeln!(out, "{}", to_graph6(&g))?;
        count += 1;
    }
    out.flush()?;
    Ok(count)
}

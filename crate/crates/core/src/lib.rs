//! Exact permanental and characteristic polynomials of all small graphs,
//! and statistics on graphs that share them.
//!
//! The pipeline enumerates one graph per isomorphism class, computes
//! `per(xI - A)` and `det(xI - A)` exactly, and groups graphs by polynomial
//! within `(n, m)` shards. Two graphs with different edge counts can never
//! share a permanental polynomial (the `x^{n-2}` coefficient is `m`), so the
//! shards are independent.

pub mod canon;
pub mod charpoly;
pub mod collide;
pub mod enumerate;
pub mod graph;
pub mod graph6;
pub mod matrix;
pub mod perm;
pub mod pipeline;
pub mod poly;
pub mod report;
pub mod runs;

pub use canon::{canonical_form, canonical_labeling, Canonical};
pub use charpoly::{char_poly, char_poly_leibniz, determinant_exact};
pub use collide::{
    fingerprint, group_families, FamilyRecord, PolyFingerprint, PolyKind, ShardStats,
};
pub use graph::{EdgeCount, Graph, GraphError};
pub use graph6::{parse_graph6, to_graph6, Graph6Error};
pub use matrix::{ArithMode, IntMatrix};
pub use perm::{perm_poly, perm_poly_symbolic, permanent_naive, permanent_ryser};
pub use poly::{IntPoly, KernelError};
pub use runs::{merge_sorted_runs, persist_fingerprints};

//! Shard-parallel computation of polynomial families.
//!
//! A work unit is one `(n, m)` shard. Shards are computed on the current
//! rayon pool and returned in ascending `m`, so the output never depends on
//! scheduling.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::charpoly::char_poly_with;
use crate::collide::{
    check_shard_soundness, fingerprint, group_families_with, shard_stats, CollideError, Duplicates,
    FamilyRecord, FingerprintError, PolyKind, ShardStats,
};
use crate::enumerate::{ingest_graph6, EnumError, Generator};
use crate::graph::{EdgeCount, Graph};
use crate::graph6::to_graph6;
use crate::matrix::ArithMode;
use crate::perm::perm_poly_with;
use crate::poly::KernelError;
use crate::runs::RunError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Kind {
    #[default]
    Perm,
    Char,
    Both,
}

impl Kind {
    pub fn wants(self, kind: PolyKind) -> bool {
        match self {
            Kind::Perm => kind == PolyKind::Permanental,
            Kind::Char => kind == PolyKind::Characteristic,
            Kind::Both => true,
        }
    }

    pub fn poly_kinds(self) -> Vec<PolyKind> {
        [PolyKind::Permanental, PolyKind::Characteristic]
            .into_iter()
            .filter(|&k| self.wants(k))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PipelineConfig {
    pub kind: Kind,
    pub mode: ArithMode,
    pub duplicates: Duplicates,
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Enum(#[from] EnumError),
    #[error("shard (n={n}, m={m}), graph {word}: {source}")]
    Kernel {
        n: usize,
        m: EdgeCount,
        word: String,
        source: KernelError,
    },
    #[error("shard (n={n}, m={m}), graph {word}: {source}")]
    Fingerprint {
        n: usize,
        m: EdgeCount,
        word: String,
        source: FingerprintError,
    },
    #[error("shard (n={n}, m={m}): {source}")]
    Collide {
        n: usize,
        m: EdgeCount,
        source: CollideError,
    },
    #[error("n={n}: {source}")]
    Soundness { n: usize, source: CollideError },
    #[error(transparent)]
    Run(#[from] RunError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl PipelineError {
    /// 2 usage, 3 decode or I/O, 4 arithmetic overflow, 5 invariant violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Enum(EnumError::TooLarge { .. } | EnumError::EdgesOutOfRange { .. }) => {
                2
            }
            PipelineError::Enum(_) | PipelineError::Io { .. } => 3,
            PipelineError::Kernel {
                source: KernelError::Overflow(_),
                ..
            } => 4,
            PipelineError::Kernel {
                source: KernelError::TooLarge { .. },
                ..
            } => 2,
            PipelineError::Kernel { .. }
            | PipelineError::Fingerprint { .. }
            | PipelineError::Soundness { .. } => 5,
            PipelineError::Collide {
                source: CollideError::BadMember { .. },
                ..
            } => 3,
            PipelineError::Collide { .. } => 5,
            PipelineError::Run(
                RunError::Io { .. } | RunError::BadRunFile { .. } | RunError::UnsortedRun { .. },
            ) => 3,
            PipelineError::Run(_) => 5,
        }
    }
}

/// Fingerprinted records of one shard, before grouping.
#[derive(Debug, Clone, Default)]
pub struct ShardRecords {
    pub perm: Vec<(crate::collide::PolyFingerprint, String)>,
    pub char: Vec<(crate::collide::PolyFingerprint, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShardResult {
    pub n: usize,
    pub m: EdgeCount,
    pub perm: Option<Vec<FamilyRecord>>,
    pub char: Option<Vec<FamilyRecord>>,
}

impl ShardResult {
    pub fn families(&self, kind: PolyKind) -> Option<&[FamilyRecord]> {
        match kind {
            PolyKind::Permanental => self.perm.as_deref(),
            PolyKind::Characteristic => self.char.as_deref(),
        }
    }

    /// Per-edge statistics; a shard with no graphs still reports its `m`.
    pub fn stats(&self, kind: PolyKind) -> Option<ShardStats> {
        self.families(kind).map(|f| ShardStats {
            n: self.n,
            m: Some(self.m),
            ..shard_stats(f)
        })
    }
}

/// Every computed shard for one vertex count, in ascending `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelResult {
    pub n: usize,
    pub shards: Vec<ShardResult>,
}

impl LevelResult {
    pub fn per_edge(&self, kind: PolyKind) -> Vec<ShardStats> {
        self.shards.iter().filter_map(|s| s.stats(kind)).collect()
    }

    pub fn total(&self, kind: PolyKind) -> ShardStats {
        let mut total =
            crate::collide::aggregate(&self.per_edge(kind)).expect("shards of one level share n");
        total.n = self.n;
        total
    }
}

fn poly_record(
    g: &Graph,
    word: &str,
    kind: PolyKind,
    mode: ArithMode,
) -> Result<(crate::collide::PolyFingerprint, String), PipelineError> {
    let (n, m) = (g.n(), g.edge_count());
    let p = match kind {
        PolyKind::Permanental => perm_poly_with(g, mode),
        PolyKind::Characteristic => char_poly_with(g, mode),
    }
    .map_err(|source| PipelineError::Kernel {
        n,
        m,
        word: word.to_string(),
        source,
    })?;
    let fp = fingerprint(kind, &p, n, m).map_err(|source| PipelineError::Fingerprint {
        n,
        m,
        word: word.to_string(),
        source,
    })?;
    Ok((fp, word.to_string()))
}

/// Computes the requested polynomials of every graph in one shard, in input order.
pub fn shard_records(
    graphs: &[Graph],
    config: PipelineConfig,
) -> Result<ShardRecords, PipelineError> {
    let rows = graphs
        .par_iter()
        .map(|g| {
            let word = to_graph6(g);
            let perm = match config.kind.wants(PolyKind::Permanental) {
                true => Some(poly_record(g, &word, PolyKind::Permanental, config.mode)?),
                false => None,
            };
            let char = match config.kind.wants(PolyKind::Characteristic) {
                true => Some(poly_record(
                    g,
                    &word,
                    PolyKind::Characteristic,
                    config.mode,
                )?),
                false => None,
            };
            Ok((perm, char))
        })
        .collect::<Result<Vec<_>, PipelineError>>()?;
    let mut out = ShardRecords::default();
    for (perm, char) in rows {
        out.perm.extend(perm);
        out.char.extend(char);
    }
    Ok(out)
}

fn group_shard(
    n: usize,
    m: EdgeCount,
    graphs: &[Graph],
    config: PipelineConfig,
) -> Result<ShardResult, PipelineError> {
    let records = shard_records(graphs, config)?;
    let group = |recs: Vec<_>| {
        group_families_with(recs, config.duplicates).map_err(|source| PipelineError::Collide {
            n,
            m,
            source,
        })
    };
    Ok(ShardResult {
        n,
        m,
        perm: config
            .kind
            .wants(PolyKind::Permanental)
            .then(|| group(records.perm))
            .transpose()?,
        char: config
            .kind
            .wants(PolyKind::Characteristic)
            .then(|| group(records.char))
            .transpose()?,
    })
}

fn check_level(level: &LevelResult) -> Result<(), PipelineError> {
    for kind in [PolyKind::Permanental, PolyKind::Characteristic] {
        check_shard_soundness(level.shards.iter().filter_map(|s| s.families(kind)))
            .map_err(|source| PipelineError::Soundness { n: level.n, source })?;
    }
    Ok(())
}

/// Edge counts to visit: the single `m` if given, else `0..=n(n-1)/2`.
pub fn edge_range(n: usize, edges: Option<EdgeCount>) -> Result<Vec<EdgeCount>, PipelineError> {
    let max = EdgeCount::max_for(n);
    match edges {
        Some(m) if m > max => Err(EnumError::EdgesOutOfRange { n, m }.into()),
        Some(m) => Ok(vec![m]),
        None => Ok((0..=max.0).map(EdgeCount).collect()),
    }
}

/// Generates shard graphs for `n` with the built-in generator.
pub fn builtin_shards(
    n: usize,
    edges: Option<EdgeCount>,
) -> Result<Vec<(EdgeCount, Vec<Graph>)>, PipelineError> {
    let generator = Generator::new(n)?;
    edge_range(n, edges)?
        .into_par_iter()
        .map(|m| Ok((m, generator.with_edges(m)?)))
        .collect()
}

/// Runs every shard of one vertex count from the built-in generator.
pub fn run_builtin(
    n: usize,
    edges: Option<EdgeCount>,
    config: PipelineConfig,
) -> Result<LevelResult, PipelineError> {
    let shards = builtin_shards(n, edges)?
        .par_iter()
        .map(|(m, graphs)| group_shard(n, *m, graphs, config))
        .collect::<Result<Vec<_>, _>>()?;
    let level = LevelResult { n, shards };
    check_level(&level)?;
    Ok(level)
}

/// Reads a graph6 file and buckets it by `(n, m)`. Only the given vertex
/// counts and edge count are kept when filters are supplied.
pub fn ingest_shards(
    path: &Path,
    ns: Option<&[usize]>,
    edges: Option<EdgeCount>,
) -> Result<BTreeMap<usize, BTreeMap<EdgeCount, Vec<Graph>>>, PipelineError> {
    let mut buckets: BTreeMap<usize, BTreeMap<EdgeCount, Vec<Graph>>> = BTreeMap::new();
    for g in ingest_graph6(path)? {
        let g = g?;
        if ns.is_some_and(|ns| !ns.contains(&g.n())) || edges.is_some_and(|m| m != g.edge_count()) {
            continue;
        }
        buckets
            .entry(g.n())
            .or_default()
            .entry(g.edge_count())
            .or_default()
            .push(g);
    }
    Ok(buckets)
}

/// Groups the graphs of a graph6 file. Each vertex count present becomes
/// one level; only shards that contain graphs are reported.
pub fn run_ingest(
    path: &Path,
    ns: Option<&[usize]>,
    edges: Option<EdgeCount>,
    config: PipelineConfig,
) -> Result<Vec<LevelResult>, PipelineError> {
    let buckets = ingest_shards(path, ns, edges)?;
    let mut levels = Vec::with_capacity(buckets.len());
    for (n, shards) in buckets {
        let shards: Vec<(EdgeCount, Vec<Graph>)> = shards.into_iter().collect();
        let shards = shards
            .par_iter()
            .map(|(m, graphs)| group_shard(n, *m, graphs, config))
            .collect::<Result<Vec<_>, _>>()?;
        let level = LevelResult { n, shards };
        check_level(&level)?;
        levels.push(level);
    }
    Ok(levels)
}

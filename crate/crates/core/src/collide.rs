//! Polynomial fingerprints, grouping into families, and mate statistics.
//!
//! A fingerprint is the exact byte encoding of `(n, m, coefficients)`:
//!
//! ```text
//! u8 n | u16 LE m | for c_{n-2}, c_{n-3}, ..., c_0: sign u8 | len u8 | len bytes LE magnitude
//! ```
//!
//! `c_n = 1` and `c_{n-1} = 0` hold for every graph and are not stored.
//! Magnitudes are minimal (`len = 0` for zero). Within one `(n, m)` shard
//! every fingerprint has the same number of coefficients, so raw byte order
//! is a total order on polynomials.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::canon::canonical_form;
use crate::graph::EdgeCount;
use crate::graph::GraphError;
use crate::graph6::{parse_graph6, to_graph6, Graph6Error};
use crate::poly::IntPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolyKind {
    /// `per(xI - A)`: the `x^{n-2}` coefficient is `m`.
    Permanental,
    /// `det(xI - A)`: the `x^{n-2}` coefficient is `-m`.
    Characteristic,
}

impl PolyKind {
    pub fn label(self) -> &'static str {
        match self {
            PolyKind::Permanental => "perm",
            PolyKind::Characteristic => "char",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FingerprintError {
    #[error("expected a degree-{expected} polynomial, got degree {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("coefficient of x^(n-1) is {0}, expected 0")]
    NonZeroTrace(i128),
    #[error("coefficient of x^(n-2) is {coeff}, inconsistent with {m} edges")]
    EdgeCountMismatch { coeff: i128, m: EdgeCount },
    #[error("malformed fingerprint bytes")]
    Malformed,
}

#[derive(Debug, Error)]
pub enum CollideError {
    #[error("record for (n={got_n}, m={got_m}) in shard (n={n}, m={m})")]
    ShardViolation {
        n: usize,
        m: EdgeCount,
        got_n: usize,
        got_m: EdgeCount,
    },
    #[error("graph {0} appears twice in one shard")]
    DuplicateMember(String),
    #[error("aggregating statistics for different vertex counts ({0} and {1})")]
    MixedN(usize, usize),
    #[error("one polynomial occurs in edge shards {0} and {1}")]
    EdgeShardCollision(EdgeCount, EdgeCount),
    #[error("member {word}: {source}")]
    BadMember { word: String, source: Graph6Error },
    #[error("member {word}: {source}")]
    Canonical { word: String, source: GraphError },
}

/// Sortable, injective key for a graph polynomial within its `(n, m)` shard.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyFingerprint {
    bytes: Vec<u8>,
}

impl PolyFingerprint {
    pub fn new(
        kind: PolyKind,
        p: &IntPoly,
        n: usize,
        m: EdgeCount,
    ) -> Result<PolyFingerprint, FingerprintError> {
        if p.degree() != n {
            return Err(FingerprintError::DegreeMismatch {
                expected: n,
                got: p.degree(),
            });
        }
        if !p.is_monic() {
            return Err(FingerprintError::NotMonic);
        }
        if n >= 1 && p.coeff(n - 1) != 0 {
            return Err(FingerprintError::NonZeroTrace(p.coeff(n - 1)));
        }
        let expected = match kind {
            PolyKind::Permanental => m.0 as i128,
            PolyKind::Characteristic => -(m.0 as i128),
        };
        let edge_coeff = if n >= 2 { p.coeff(n - 2) } else { 0 };
        if edge_coeff != expected {
            return Err(FingerprintError::EdgeCountMismatch {
                coeff: edge_coeff,
                m,
            });
        }

        let mut bytes = Vec::with_capacity(3 + 3 * n);
        bytes.push(n as u8);
        bytes.extend_from_slice(&m.0.to_le_bytes());
        for j in (0..n.saturating_sub(1)).rev() {
            let c = p.coeff(j);
            bytes.push((c < 0) as u8);
            let mag = c.unsigned_abs().to_le_bytes();
            let len = mag.iter().rposition(|&b| b != 0).map_or(0, |i| i + 1);
            bytes.push(len as u8);
            bytes.extend_from_slice(&mag[..len]);
        }
        Ok(PolyFingerprint { bytes })
    }

    /// Validates and wraps an encoded fingerprint.
    pub fn from_bytes(bytes: Vec<u8>) -> Result<PolyFingerprint, FingerprintError> {
        let fp = PolyFingerprint { bytes };
        match fp.decode() {
            Some(_) => Ok(fp),
            None => Err(FingerprintError::Malformed),
        }
    }

    fn decode(&self) -> Option<IntPoly> {
        let b = &self.bytes;
        let n = *b.first()? as usize;
        if b.len() < 3 {
            return None;
        }
        let mut coeffs = vec![0i128; n + 1];
        coeffs[n] = 1;
        let mut pos = 3;
        for j in (0..n.saturating_sub(1)).rev() {
            let sign = *b.get(pos)?;
            let len = *b.get(pos + 1)? as usize;
            if sign > 1 || len > 16 || (len > 0 && *b.get(pos + 1 + len)? == 0) {
                return None;
            }
            let mut mag = [0u8; 16];
            mag[..len].copy_from_slice(b.get(pos + 2..pos + 2 + len)?);
            let mag = u128::from_le_bytes(mag);
            let value = i128::try_from(mag).ok()?;
            if sign == 1 && value == 0 {
                return None;
            }
            coeffs[j] = if sign == 1 { -value } else { value };
            pos += 2 + len;
        }
        (pos == b.len()).then(|| IntPoly::new(coeffs))
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn n(&self) -> usize {
        self.bytes[0] as usize
    }

    pub fn m(&self) -> EdgeCount {
        EdgeCount(u16::from_le_bytes([self.bytes[1], self.bytes[2]]))
    }

    /// The coefficient body without the `(n, m)` prefix.
    pub fn body(&self) -> &[u8] {
        &self.bytes[3..]
    }

    pub fn poly(&self) -> IntPoly {
        self.decode()
            .expect("fingerprints are validated on construction")
    }
}

impl fmt::Debug for PolyFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PolyFingerprint(n={}, m={}, {})",
            self.n(),
            self.m(),
            self.poly()
        )
    }
}

pub fn fingerprint(
    kind: PolyKind,
    p: &IntPoly,
    n: usize,
    m: EdgeCount,
) -> Result<PolyFingerprint, FingerprintError> {
    PolyFingerprint::new(kind, p, n, m)
}

/// Graphs sharing one polynomial. Members are graph6 words in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyRecord {
    pub fingerprint: PolyFingerprint,
    pub members: Vec<String>,
}

impl FamilyRecord {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// One row of the per-edge tables; `m` is `None` for rows aggregated over `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ShardStats {
    pub n: usize,
    pub m: Option<EdgeCount>,
    pub graphs: u64,
    pub distinct_polys: u64,
    pub with_mate: u64,
    pub max_family: u64,
}

impl ShardStats {
    /// `with_mate / graphs` rounded half-up to `decimals` places; plain `0`
    /// when nothing has a mate.
    pub fn fraction(&self, decimals: u32) -> String {
        format_fraction(self.with_mate, self.graphs, decimals)
    }
}

pub fn format_fraction(num: u64, den: u64, decimals: u32) -> String {
    if num == 0 || den == 0 {
        return "0".to_string();
    }
    let scale = 10u128.pow(decimals);
    let scaled = (2 * num as u128 * scale + den as u128) / (2 * den as u128);
    if decimals == 0 {
        return scaled.to_string();
    }
    format!(
        "{}.{:0width$}",
        scaled / scale,
        scaled % scale,
        width = decimals as usize
    )
}

/// Whether to merge members that are isomorphic (ingested data may repeat
/// a class under different labelings) or reject exact duplicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Duplicates {
    #[default]
    Reject,
    DedupIsomorphic,
}

/// Groups one shard's `(fingerprint, graph6)` records into families, sorted
/// by fingerprint bytes. Exact duplicate members are an error.
pub fn group_families(
    records: impl IntoIterator<Item = (PolyFingerprint, String)>,
) -> Result<Vec<FamilyRecord>, CollideError> {
    group_families_with(records, Duplicates::Reject)
}

pub fn group_families_with(
    records: impl IntoIterator<Item = (PolyFingerprint, String)>,
    duplicates: Duplicates,
) -> Result<Vec<FamilyRecord>, CollideError> {
    let mut shard: Option<(usize, EdgeCount)> = None;
    let mut groups: HashMap<PolyFingerprint, Vec<String>> = HashMap::new();
    let mut seen_classes: HashSet<String> = HashSet::new();
    for (fp, word) in records {
        let key = (fp.n(), fp.m());
        match shard {
            None => shard = Some(key),
            Some((n, m)) if (n, m) != key => {
                return Err(CollideError::ShardViolation {
                    n,
                    m,
                    got_n: key.0,
                    got_m: key.1,
                });
            }
            Some(_) => {}
        }
        let word = match duplicates {
            Duplicates::Reject => word,
            Duplicates::DedupIsomorphic => {
                let g = parse_graph6(&word).map_err(|source| CollideError::BadMember {
                    word: word.clone(),
                    source,
                })?;
                let canon = canonical_form(&g).map_err(|source| CollideError::Canonical {
                    word: word.clone(),
                    source,
                })?;
                let canon = to_graph6(&canon);
                if !seen_classes.insert(canon.clone()) {
                    continue;
                }
                canon
            }
        };
        groups.entry(fp).or_default().push(word);
    }
    let mut families: Vec<FamilyRecord> = groups
        .into_iter()
        .map(|(fingerprint, mut members)| {
            members.sort_unstable();
            FamilyRecord {
                fingerprint,
                members,
            }
        })
        .collect();
    families.sort_unstable_by(|a, b| a.fingerprint.cmp(&b.fingerprint));
    for fam in &families {
        if let Some(w) = fam.members.windows(2).find(|w| w[0] == w[1]) {
            return Err(CollideError::DuplicateMember(w[0].clone()));
        }
    }
    Ok(families)
}

/// Statistics of one shard. An empty slice gives all-zero counts.
pub fn shard_stats(families: &[FamilyRecord]) -> ShardStats {
    let mut stats = ShardStats::default();
    if let Some(first) = families.first() {
        stats.n = first.fingerprint.n();
        stats.m = Some(first.fingerprint.m());
    }
    for fam in families {
        let size = fam.size() as u64;
        stats.graphs += size;
        stats.distinct_polys += 1;
        if size >= 2 {
            stats.with_mate += size;
        }
        stats.max_family = stats.max_family.max(size);
    }
    stats
}

/// Folds per-edge rows for one `n` into a single row. Summing is valid
/// because polynomials of different shards never coincide.
pub fn aggregate(stats: &[ShardStats]) -> Result<ShardStats, CollideError> {
    let mut total = ShardStats {
        n: stats.first().map_or(0, |s| s.n),
        m: None,
        ..ShardStats::default()
    };
    for s in stats {
        if s.n != total.n {
            return Err(CollideError::MixedN(total.n, s.n));
        }
        total.graphs += s.graphs;
        total.distinct_polys += s.distinct_polys;
        total.with_mate += s.with_mate;
        total.max_family = total.max_family.max(s.max_family);
    }
    Ok(total)
}

/// Checks that no coefficient vector appears in two different edge shards.
pub fn check_shard_soundness<'a>(
    shards: impl IntoIterator<Item = &'a [FamilyRecord]>,
) -> Result<(), CollideError> {
    let mut owner: HashMap<(usize, &'a [u8]), EdgeCount> = HashMap::new();
    for families in shards {
        for fam in families {
            let fp = &fam.fingerprint;
            if let Some(&m) = owner.get(&(fp.n(), fp.body())) {
                if m != fp.m() {
                    return Err(CollideError::EdgeShardCollision(m, fp.m()));
                }
            }
            owner.insert((fp.n(), fp.body()), fp.m());
        }
    }
    Ok(())
}

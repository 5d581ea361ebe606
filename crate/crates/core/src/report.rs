//! Tab-separated reports over computed levels.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::charpoly::char_poly_with;
use crate::collide::{FamilyRecord, PolyKind, ShardStats};
use crate::graph6::{parse_graph6, Graph6Error};
use crate::matrix::ArithMode;
use crate::perm::perm_poly_with;
use crate::pipeline::{Kind, LevelResult};
use crate::poly::{IntPoly, KernelError};

pub const FRACTION_DECIMALS: u32 = 5;

fn count_column(kind: PolyKind) -> &'static str {
    match kind {
        PolyKind::Permanental => "perm_pols",
        PolyKind::Characteristic => "char_pols",
    }
}

fn aggregate_row(out: &mut String, s: &ShardStats) {
    let _ = writeln!(
        out,
        "{}\t{}\t{}\t{}\t{}\t{}",
        s.n,
        s.graphs,
        s.distinct_polys,
        s.with_mate,
        s.fraction(FRACTION_DECIMALS),
        s.max_family
    );
}

pub fn per_edge_row(out: &mut String, s: &ShardStats) {
    let m = s.m.map_or(String::from("-"), |m| m.to_string());
    let _ = writeln!(
        out,
        "{}\t{}\t{}\t{}\t{}\t{}",
        s.n, m, s.graphs, s.distinct_polys, s.with_mate, s.max_family
    );
}

pub fn per_edge_header(kind: PolyKind) -> String {
    format!(
        "n\tm\tgraphs\t{}\twith_mate\tmax_family\n",
        count_column(kind)
    )
}

/// One row per `n`, or one row per `(n, m)` with `per_edge`. With
/// [`Kind::Both`] the permanental block comes first, then a blank line.
pub fn table_report(levels: &[LevelResult], kind: Kind, per_edge: bool) -> String {
    let mut out = String::new();
    for (i, pk) in kind.poly_kinds().into_iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        if per_edge {
            out.push_str(&per_edge_header(pk));
            for s in levels.iter().flat_map(|l| l.per_edge(pk)) {
                per_edge_row(&mut out, &s);
            }
        } else {
            let _ = writeln!(
                out,
                "n\tgraphs\t{}\twith_mate\tfraction\tmax_family",
                count_column(pk)
            );
            for level in levels {
                aggregate_row(&mut out, &level.total(pk));
            }
        }
    }
    out
}

pub fn family_header() -> &'static str {
    "kind\tn\tm\tsize\tpolynomial\tmembers\n"
}

pub fn family_row(out: &mut String, kind: &str, fam: &FamilyRecord) {
    let fp = &fam.fingerprint;
    let _ = writeln!(
        out,
        "{kind}\t{}\t{}\t{}\t{}\t{}",
        fp.n(),
        fp.m(),
        fam.size(),
        fp.poly(),
        fam.members.join(",")
    );
}

/// Every family with at least two members, by `n`, then `m`, then fingerprint.
pub fn mates_report(levels: &[LevelResult], kind: Kind) -> String {
    let mut out = String::from(family_header());
    for pk in kind.poly_kinds() {
        for level in levels {
            for shard in &level.shards {
                for fam in shard
                    .families(pk)
                    .unwrap_or_default()
                    .iter()
                    .filter(|f| f.size() >= 2)
                {
                    family_row(&mut out, pk.label(), fam);
                }
            }
        }
    }
    out
}

/// Pairs of graphs with equal characteristic but different permanental
/// polynomials, as `(n, m, word, word)` with the words in ascending order.
pub fn cospectral_not_copermanental(level: &LevelResult) -> Vec<(usize, u16, String, String)> {
    let mut pairs = Vec::new();
    for shard in &level.shards {
        let (Some(perm), Some(char)) = (&shard.perm, &shard.char) else {
            continue;
        };
        let perm_class: HashMap<&str, usize> = perm
            .iter()
            .enumerate()
            .flat_map(|(i, f)| f.members.iter().map(move |w| (w.as_str(), i)))
            .collect();
        for fam in char.iter().filter(|f| f.size() >= 2) {
            for (i, a) in fam.members.iter().enumerate() {
                for b in &fam.members[i + 1..] {
                    if perm_class.get(a.as_str()) != perm_class.get(b.as_str()) {
                        pairs.push((shard.n, shard.m.0, a.clone(), b.clone()));
                    }
                }
            }
        }
    }
    pairs
}

/// Per-`n` statistics of both polynomials side by side, then one `#` line
/// per cospectral pair that the permanental polynomial separates.
pub fn compare_report(levels: &[LevelResult]) -> String {
    let mut out = String::from(
        "n\tgraphs\tperm_pols\tperm_with_mate\tperm_fraction\tperm_max_family\t\
         char_pols\tchar_with_mate\tchar_fraction\tchar_max_family\tcospectral_not_copermanental\n",
    );
    let mut details = String::new();
    for level in levels {
        let p = level.total(PolyKind::Permanental);
        let c = level.total(PolyKind::Characteristic);
        let pairs = cospectral_not_copermanental(level);
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            level.n,
            p.graphs,
            p.distinct_polys,
            p.with_mate,
            p.fraction(FRACTION_DECIMALS),
            p.max_family,
            c.distinct_polys,
            c.with_mate,
            c.fraction(FRACTION_DECIMALS),
            c.max_family,
            pairs.len()
        );
        for (n, m, a, b) in pairs {
            let _ = writeln!(details, "#\t{n}\t{m}\t{a}\t{b}");
        }
    }
    out.push_str(&details);
    out
}

#[derive(Debug, thiserror::Error)]
pub enum PolyReportError {
    #[error("bad graph6 word {word:?}: {source}")]
    Decode { word: String, source: Graph6Error },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

pub fn poly_of(word: &str, kind: PolyKind, mode: ArithMode) -> Result<IntPoly, PolyReportError> {
    let g = parse_graph6(word).map_err(|source| PolyReportError::Decode {
        word: word.to_string(),
        source,
    })?;
    Ok(match kind {
        PolyKind::Permanental => perm_poly_with(&g, mode)?,
        PolyKind::Characteristic => char_poly_with(&g, mode)?,
    })
}

/// `kind`, the polynomial, and its coefficients from the leading one down.
pub fn poly_report(word: &str, kind: Kind, mode: ArithMode) -> Result<String, PolyReportError> {
    let mut out = String::new();
    for pk in kind.poly_kinds() {
        let p = poly_of(word, pk, mode)?;
        let coeffs: Vec<String> = p.coeffs().iter().rev().map(i128::to_string).collect();
        let _ = writeln!(out, "{}\t{}\t{}", pk.label(), p, coeffs.join(" "));
    }
    Ok(out)
}

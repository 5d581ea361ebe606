//! One line per acceptance criterion: `ACCEPTANCE <name>: PASS|FAIL`.

mod common;

use std::process::{Command, ExitCode};
use std::sync::OnceLock;
use std::time::Instant;

use copermanental::collide::{format_fraction, group_families, PolyKind, ShardStats};
use copermanental::pipeline::{builtin_shards, shard_records, Kind, LevelResult, PipelineConfig};
use copermanental::runs::{merge_sorted_runs, persist_fingerprints};
use rand::seq::SliceRandom;

/// `(n, graphs, distinct, with_mate, fraction, max_family)`
const TABLE_1: [(usize, u64, u64, u64, &str, u64); 10] = [
    (0, 1, 1, 0, "0", 1),
    (1, 1, 1, 0, "0", 1),
    (2, 2, 2, 0, "0", 1),
    (3, 4, 4, 0, "0", 1),
    (4, 11, 11, 0, "0", 1),
    (5, 34, 34, 0, "0", 1),
    (6, 156, 153, 6, "0.03846", 2),
    (7, 1044, 1035, 17, "0.01628", 3),
    (8, 12346, 12247, 188, "0.01523", 4),
    (9, 274668, 274153, 980, "0.00357", 5),
];

/// Characteristic polynomials; the fraction is printed to three places.
const TABLE_2: [(usize, u64, u64, u64, &str, u64); 10] = [
    (0, 1, 1, 0, "0", 1),
    (1, 1, 1, 0, "0", 1),
    (2, 2, 2, 0, "0", 1),
    (3, 4, 4, 0, "0", 1),
    (4, 11, 11, 0, "0", 1),
    (5, 34, 33, 2, "0.059", 2),
    (6, 156, 151, 10, "0.064", 2),
    (7, 1044, 988, 110, "0.105", 3),
    (8, 12346, 11453, 1722, "0.139", 4),
    (9, 274668, 247357, 51039, "0.186", 10),
];

// per-edge rows: [m, graphs, distinct, with_mate, max_family]
const PER_EDGE_4: [[u64; 5]; 7] = [
    [0, 1, 1, 0, 1],
    [1, 1, 1, 0, 1],
    [2, 2, 2, 0, 1],
    [3, 3, 3, 0, 1],
    [4, 2, 2, 0, 1],
    [5, 1, 1, 0, 1],
    [6, 1, 1, 0, 1],
];

const PER_EDGE_5: [[u64; 5]; 11] = [
    [0, 1, 1, 0, 1],
    [1, 1, 1, 0, 1],
    [2, 2, 2, 0, 1],
    [3, 4, 4, 0, 1],
    [4, 6, 6, 0, 1],
    [5, 6, 6, 0, 1],
    [6, 6, 6, 0, 1],
    [7, 4, 4, 0, 1],
    [8, 2, 2, 0, 1],
    [9, 1, 1, 0, 1],
    [10, 1, 1, 0, 1],
];

const PER_EDGE_6: [[u64; 5]; 16] = [
    [0, 1, 1, 0, 1],
    [1, 1, 1, 0, 1],
    [2, 2, 2, 0, 1],
    [3, 5, 5, 0, 1],
    [4, 9, 7, 4, 2],
    [5, 15, 15, 0, 1],
    [6, 21, 21, 0, 1],
    [7, 24, 23, 2, 2],
    [8, 24, 24, 0, 1],
    [9, 21, 21, 0, 1],
    [10, 15, 15, 0, 1],
    [11, 9, 9, 0, 1],
    [12, 5, 5, 0, 1],
    [13, 2, 2, 0, 1],
    [14, 1, 1, 0, 1],
    [15, 1, 1, 0, 1],
];

const PER_EDGE_7: [[u64; 5]; 22] = [
    [0, 1, 1, 0, 1],
    [1, 1, 1, 0, 1],
    [2, 2, 2, 0, 1],
    [3, 5, 5, 0, 1],
    [4, 10, 8, 4, 2],
    [5, 21, 19, 4, 2],
    [6, 41, 38, 6, 2],
    [7, 65, 63, 3, 3],
    [8, 97, 97, 0, 1],
    [9, 131, 131, 0, 1],
    [10, 148, 148, 0, 1],
    [11, 148, 148, 0, 1],
    [12, 131, 131, 0, 1],
    [13, 97, 97, 0, 1],
    [14, 65, 65, 0, 1],
    [15, 41, 41, 0, 1],
    [16, 21, 21, 0, 1],
    [17, 10, 10, 0, 1],
    [18, 5, 5, 0, 1],
    [19, 2, 2, 0, 1],
    [20, 1, 1, 0, 1],
    [21, 1, 1, 0, 1],
];

const PER_EDGE_8: [[u64; 5]; 29] = [
    [0, 1, 1, 0, 1],
    [1, 1, 1, 0, 1],
    [2, 2, 2, 0, 1],
    [3, 5, 5, 0, 1],
    [4, 11, 9, 4, 2],
    [5, 24, 20, 8, 2],
    [6, 56, 48, 13, 3],
    [7, 115, 102, 23, 4],
    [8, 221, 200, 39, 3],
    [9, 402, 392, 20, 2],
    [10, 663, 652, 22, 2],
    [11, 980, 971, 18, 2],
    [12, 1312, 1301, 21, 3],
    [13, 1557, 1552, 10, 2],
    [14, 1646, 1643, 6, 2],
    [15, 1557, 1557, 0, 1],
    [16, 1312, 1311, 2, 2],
    [17, 980, 979, 2, 2],
    [18, 663, 663, 0, 1],
    [19, 402, 402, 0, 1],
    [20, 221, 221, 0, 1],
    [21, 115, 115, 0, 1],
    [22, 56, 56, 0, 1],
    [23, 24, 24, 0, 1],
    [24, 11, 11, 0, 1],
    [25, 5, 5, 0, 1],
    [26, 2, 2, 0, 1],
    [27, 1, 1, 0, 1],
    [28, 1, 1, 0, 1],
];

const PER_EDGE_9: [[u64; 5]; 37] = [
    [0, 1, 1, 0, 1],
    [1, 1, 1, 0, 1],
    [2, 2, 2, 0, 1],
    [3, 5, 5, 0, 1],
    [4, 11, 9, 4, 2],
    [5, 25, 21, 8, 2],
    [6, 63, 52, 17, 4],
    [7, 148, 120, 48, 5],
    [8, 345, 293, 88, 5],
    [9, 771, 715, 102, 3],
    [10, 1637, 1570, 127, 3],
    [11, 3252, 3210, 84, 2],
    [12, 5995, 5959, 70, 3],
    [13, 10120, 10088, 64, 2],
    [14, 15615, 15574, 81, 3],
    [15, 21933, 21904, 58, 2],
    [16, 27987, 27952, 69, 3],
    [17, 32403, 32376, 54, 2],
    [18, 34040, 34017, 46, 2],
    [19, 32403, 32391, 24, 2],
    [20, 27987, 27979, 16, 2],
    [21, 21933, 21930, 6, 2],
    [22, 15615, 15610, 10, 2],
    [23, 10120, 10119, 2, 2],
    [24, 5995, 5994, 2, 2],
    [25, 3252, 3252, 0, 1],
    [26, 1637, 1637, 0, 1],
    [27, 771, 771, 0, 1],
    [28, 345, 345, 0, 1],
    [29, 148, 148, 0, 1],
    [30, 63, 63, 0, 1],
    [31, 25, 25, 0, 1],
    [32, 11, 11, 0, 1],
    [33, 5, 5, 0, 1],
    [34, 2, 2, 0, 1],
    [35, 1, 1, 0, 1],
    [36, 1, 1, 0, 1],
];

fn per_edge_expected(n: usize) -> &'static [[u64; 5]] {
    match n {
        4 => &PER_EDGE_4,
        5 => &PER_EDGE_5,
        6 => &PER_EDGE_6,
        7 => &PER_EDGE_7,
        8 => &PER_EDGE_8,
        9 => &PER_EDGE_9,
        _ => unreachable!(),
    }
}

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn levels() -> &'static Vec<LevelResult> {
    static LEVELS: OnceLock<Vec<LevelResult>> = OnceLock::new();
    LEVELS.get_or_init(|| (0..=9).map(|n| common::level(n, Kind::Both)).collect())
}

fn check_row(
    label: &str,
    got: &ShardStats,
    want: (u64, u64, u64, u64),
    fraction: Option<(&str, u32)>,
) -> Outcome {
    let have = (
        got.graphs,
        got.distinct_polys,
        got.with_mate,
        got.max_family,
    );
    if have != want {
        return Err(format!("{label}: got {have:?}, expected {want:?}"));
    }
    if let Some((expected, decimals)) = fraction {
        let f = format_fraction(got.with_mate, got.graphs, decimals);
        if f != expected {
            return Err(format!("{label}: fraction {f}, expected {expected}"));
        }
    }
    Ok(())
}

fn table_rows(
    kind: PolyKind,
    rows: &[(usize, u64, u64, u64, &str, u64)],
    decimals: u32,
) -> Outcome {
    for &(n, graphs, distinct, mates, fraction, max) in rows {
        let got = levels()[n].total(kind);
        check_row(
            &format!("n={n}"),
            &got,
            (graphs, distinct, mates, max),
            Some((fraction, decimals)),
        )?;
    }
    Ok(())
}

fn table1_small() -> Outcome {
    table_rows(PolyKind::Permanental, &TABLE_1[..=8], 5)
}

fn table1_nine() -> Outcome {
    table_rows(PolyKind::Permanental, &TABLE_1[9..], 5)
}

fn per_edge_tables() -> Outcome {
    for n in 4..=9 {
        let got = levels()[n].per_edge(PolyKind::Permanental);
        let want = per_edge_expected(n);
        if got.len() != want.len() {
            return Err(format!(
                "n={n}: {} rows, expected {}",
                got.len(),
                want.len()
            ));
        }
        for (row, w) in got.iter().zip(want) {
            let m = row.m.map(|m| m.get() as u64);
            if m != Some(w[0]) {
                return Err(format!("n={n}: row for m={m:?}, expected m={}", w[0]));
            }
            check_row(
                &format!("n={n} m={}", w[0]),
                row,
                (w[1], w[2], w[3], w[4]),
                None,
            )?;
        }
    }
    Ok(())
}

fn characteristic_comparison() -> Outcome {
    table_rows(PolyKind::Characteristic, &TABLE_2, 3)
}

fn smallest_mates() -> Outcome {
    for n in 0..=5 {
        let mates: usize = levels()[n]
            .shards
            .iter()
            .flat_map(|s| s.perm.as_deref().unwrap())
            .filter(|f| f.size() >= 2)
            .count();
        if mates != 0 {
            return Err(format!("n={n}: {mates} families with mates"));
        }
    }
    let mut found = Vec::new();
    for shard in &levels()[6].shards {
        for fam in shard
            .perm
            .as_deref()
            .unwrap()
            .iter()
            .filter(|f| f.size() >= 2)
        {
            found.push((shard.m.get(), fam.size()));
        }
    }
    match found.as_slice() {
        [(4, 2), (4, 2), (7, 2)] => Ok(()),
        other => Err(format!("n=6 families (m, size): {other:?}")),
    }
}

fn oracle_suites() -> Outcome {
    common::ryser_matches_naive(500)?;
    let count = common::kernels_match_symbolic(6)?;
    if count != 208 {
        return Err(format!(
            "{count} graphs on at most 6 vertices, expected 208"
        ));
    }
    common::coefficient_invariants(8)?;
    common::relabeling_invariance(1000)?;
    common::union_multiplicativity(200)
}

fn pipeline_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_copermanental");
    let mut outputs = Vec::new();
    for workers in ["1", "2", "4"] {
        for per_edge in [false, true] {
            let mut cmd = Command::new(bin);
            cmd.args([
                "table",
                "--n",
                "0..8",
                "--kind",
                "both",
                "--workers",
                workers,
            ]);
            if per_edge {
                cmd.arg("--per-edge");
            }
            let out = cmd.output().map_err(|e| e.to_string())?;
            if !out.status.success() {
                return Err(format!(
                    "--workers {workers}: {}",
                    String::from_utf8_lossy(&out.stderr)
                ));
            }
            outputs.push(out.stdout);
        }
    }
    for (i, out) in outputs.iter().enumerate() {
        if out != &outputs[i % 2] {
            return Err(format!(
                "run {i} differs from the first run with the same flags"
            ));
        }
    }
    let expected = "6\t156\t153\t6\t0.03846\t2";
    if !String::from_utf8_lossy(&outputs[0])
        .lines()
        .any(|l| l == expected)
    {
        return Err("aggregate output lacks the n=6 row".into());
    }
    Ok(())
}

fn external_merge_equivalence() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut rng = common::rng(4);
    let config = PipelineConfig {
        kind: Kind::Both,
        ..Default::default()
    };
    for n in 0..=8 {
        for (m, graphs) in builtin_shards(n, None).map_err(|e| e.to_string())? {
            let records = shard_records(&graphs, config).map_err(|e| e.to_string())?;
            for (kind, recs) in [("perm", records.perm), ("char", records.char)] {
                let expected = group_families(recs.clone()).map_err(|e| e.to_string())?;
                let mut shuffled = recs;
                shuffled.shuffle(&mut rng);
                let mut paths = Vec::new();
                for part in 0..4 {
                    let chunk: Vec<_> = shuffled.iter().skip(part).step_by(4).cloned().collect();
                    let path = dir.path().join(format!("{kind}-{n}-{m}-{part}.run"));
                    persist_fingerprints(chunk, n, m, &path).map_err(|e| e.to_string())?;
                    paths.push(path);
                }
                let merged = merge_sorted_runs(&paths)
                    .map_err(|e| e.to_string())?
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| e.to_string())?;
                if merged != expected {
                    return Err(format!("{kind} shard n={n} m={m}: merged families differ"));
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("table1_aggregate_n_le_8", table1_small),
        ("table1_aggregate_n9", table1_nine),
        ("per_edge_tables_n4_to_n9", per_edge_tables),
        (
            "characteristic_comparison_n_le_9",
            characteristic_comparison,
        ),
        ("smallest_mates_n6", smallest_mates),
        ("oracle_suites", oracle_suites),
        ("pipeline_determinism", pipeline_determinism),
        ("external_merge_equivalence", external_merge_equivalence),
    ];
    let start = Instant::now();
    levels();
    println!(
        "computed all levels n <= 9 in {:.1}s",
        start.elapsed().as_secs_f64()
    );
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(()) => println!("ACCEPTANCE {name}: PASS"),
            Err(why) => {
                failed += 1;
                println!("ACCEPTANCE {name}: FAIL {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_copermanental"))
        .args(args)
        .env_remove("COPERM_WORKERS")
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

#[test]
fn poly_verb() {
    assert_eq!(stdout(&["poly", "A_"]), "perm\tx^2 + 1\t1 0 1\n");
    assert_eq!(
        stdout(&["poly", "A_", "--kind", "char"]),
        "char\tx^2 - 1\t1 0 -1\n"
    );
    assert_eq!(
        stdout(&["poly", "Bg", "--widened"]),
        "perm\tx^3 + 2x\t1 0 2 0\n"
    );
}

#[test]
fn table_rows() {
    let text = stdout(&["table", "--n", "3..7"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "n\tgraphs\tperm_pols\twith_mate\tfraction\tmax_family"
    );
    assert_eq!(lines[1], "3\t4\t4\t0\t0\t1");
    assert_eq!(lines[5], "7\t1044\t1035\t17\t0.01628\t3");
    let per_edge = stdout(&["table", "--n", "6", "--edges", "7", "--per-edge"]);
    assert_eq!(per_edge.lines().nth(1), Some("6\t7\t24\t23\t2\t2"));
}

#[test]
fn mates_and_compare() {
    let mates = stdout(&["mates", "--n", "5"]);
    assert_eq!(mates.lines().count(), 1);
    let mates = stdout(&["mates", "--n", "8"]);
    let largest = mates
        .lines()
        .skip(1)
        .map(|l| l.split('\t').collect::<Vec<_>>())
        .max_by_key(|f| f[3].parse::<u32>().unwrap());
    let largest = largest.unwrap();
    assert_eq!((largest[2], largest[3]), ("7", "4"));

    let compare = stdout(&["compare", "--n", "8"]);
    let row: Vec<&str> = compare.lines().nth(1).unwrap().split('\t').collect();
    assert_eq!((row[3], row[7]), ("188", "1722"));
    assert!(compare.lines().skip(2).all(|l| l.starts_with("#\t8\t")));
}

#[test]
fn enumerate_ingest_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("seven.g6");
    let file = file.to_str().unwrap();
    stdout(&["enumerate", "--n", "7", "--out", file]);
    assert_eq!(std::fs::read_to_string(file).unwrap().lines().count(), 1044);
    assert_eq!(
        stdout(&["table", "--in", file]),
        stdout(&["table", "--n", "7"])
    );
    assert_eq!(
        stdout(&["table", "--in", file, "--dedup", "--kind", "char"]),
        stdout(&["table", "--n", "7", "--kind", "char"])
    );
}

#[test]
fn fingerprint_then_merge() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let listing = stdout(&["fingerprint", "--n", "7", "--out", out]);
    let runs: Vec<&str> = listing
        .lines()
        .map(|l| l.split('\t').next().unwrap())
        .collect();
    assert_eq!(runs.len(), 22);
    assert!(runs.iter().all(|r| Path::new(r).exists()));
    let mut args = vec!["merge", "--stats"];
    args.extend(&runs);
    let merged = stdout(&args);
    let table = stdout(&["table", "--n", "7", "--per-edge"]);
    assert_eq!(
        merged.lines().skip(1).collect::<Vec<_>>(),
        table.lines().skip(1).collect::<Vec<_>>()
    );
    let mut args = vec!["merge"];
    args.extend(&runs);
    assert_eq!(
        stdout(&args).lines().count(),
        stdout(&["mates", "--n", "7"]).lines().count()
    );
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["table"]), 2);
    assert_eq!(code(&["table", "--n", "10"]), 2);
    assert_eq!(code(&["table", "--n", "5", "--edges", "11"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["poly", "A"]), 3);
    assert_eq!(code(&["table", "--in", "/nonexistent/graphs.g6"]), 3);
    assert_eq!(code(&["merge", "/nonexistent/a.run"]), 3);

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("dup.g6");
    std::fs::write(&file, "Bg\nBg\n").unwrap();
    let out = run(&["table", "--in", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n=3, m=2"));
}

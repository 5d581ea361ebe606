use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use copermanental::collide::{shard_stats, Duplicates, FamilyRecord, PolyKind};
use copermanental::enumerate::{write_graph6, Generator};
use copermanental::pipeline::{
    builtin_shards, ingest_shards, run_builtin, run_ingest, shard_records, Kind, LevelResult,
    PipelineConfig, PipelineError,
};
use copermanental::report::{self, PolyReportError};
use copermanental::runs::{merge_sorted_runs, persist_fingerprints};
use copermanental::{ArithMode, EdgeCount, KernelError};

#[derive(Parser)]
#[command(
    name = "copermanental",
    version,
    about = "Permanental and characteristic polynomial statistics of small graphs"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Vertex count, or an inclusive range such as 3..8
    #[arg(long = "n", global = true, value_parser = parse_range)]
    n: Option<RangeInclusive<usize>>,
    /// Restrict to one edge count
    #[arg(long, global = true)]
    edges: Option<u16>,
    #[arg(long, global = true, value_enum, default_value_t = KindArg::Perm)]
    kind: KindArg,
    /// Read graphs from a graph6 file instead of generating them
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    /// Write to this path instead of stdout (a directory for `fingerprint`)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, env = "COPERM_WORKERS")]
    workers: Option<usize>,
    /// Fall back to big integers instead of failing on 128-bit overflow
    #[arg(long, global = true)]
    widened: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Perm,
    Char,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Print one graph6 line per isomorphism class
    Enumerate,
    /// Print the polynomials of graph6 words
    Poly {
        #[arg(required = true)]
        graphs: Vec<String>,
    },
    /// Per-n statistics, or per-(n, m) with --per-edge
    Table {
        #[arg(long)]
        per_edge: bool,
        /// Collapse isomorphic input graphs before grouping
        #[arg(long)]
        dedup: bool,
    },
    /// List every family with two or more members
    Mates {
        #[arg(long)]
        dedup: bool,
    },
    /// Permanental and characteristic statistics side by side
    Compare {
        #[arg(long)]
        dedup: bool,
    },
    /// Write one sorted run file per shard into the --out directory
    Fingerprint,
    /// Merge run files and print their families
    Merge {
        #[arg(required = true)]
        runs: Vec<PathBuf>,
        /// Print per-shard statistics instead of families
        #[arg(long)]
        stats: bool,
        /// Include single-member families
        #[arg(long)]
        all: bool,
    },
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?);
            if a > b {
                return Err(format!("empty range {s}"));
            }
            Ok(a..=b)
        }
        None => num(s).map(|n| n..=n),
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Poly(#[from] PolyReportError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Pipeline(e) => e.exit_code() as u8,
            CliError::Poly(PolyReportError::Decode { .. }) | CliError::Io { .. } => 3,
            CliError::Poly(PolyReportError::Kernel(KernelError::Overflow(_))) => 4,
            CliError::Poly(PolyReportError::Kernel(KernelError::TooLarge { .. })) => 2,
            CliError::Poly(PolyReportError::Kernel(_)) => 5,
        }
    }
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Perm => Kind::Perm,
            KindArg::Char => Kind::Char,
            KindArg::Both => Kind::Both,
        }
    }
}

impl Global {
    fn config(&self, kind: Kind, dedup: bool) -> PipelineConfig {
        PipelineConfig {
            kind,
            mode: if self.widened {
                ArithMode::Widened
            } else {
                ArithMode::Fixed128
            },
            duplicates: if dedup {
                Duplicates::DedupIsomorphic
            } else {
                Duplicates::Reject
            },
        }
    }

    fn edges(&self) -> Option<EdgeCount> {
        self.edges.map(EdgeCount)
    }

    fn require_n(&self) -> Result<RangeInclusive<usize>, CliError> {
        self.n
            .clone()
            .ok_or_else(|| CliError::Usage("--n is required unless --in is given".into()))
    }

    fn levels(&self, config: PipelineConfig) -> Result<Vec<LevelResult>, CliError> {
        match &self.input {
            Some(path) => {
                let ns: Option<Vec<usize>> = self.n.clone().map(Iterator::collect);
                Ok(run_ingest(path, ns.as_deref(), self.edges(), config)?)
            }
            None => self
                .require_n()?
                .map(|n| run_builtin(n, self.edges(), config).map_err(CliError::from))
                .collect(),
        }
    }

    fn emit(&self, text: &str) -> Result<(), CliError> {
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            }),
            None => {
                let mut stdout = io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .and_then(|_| stdout.flush())
                    .or_else(ignore_broken_pipe)
                    .map_err(|source| CliError::Io {
                        path: PathBuf::from("<stdout>"),
                        source,
                    })
            }
        }
    }
}

fn ignore_broken_pipe(e: io::Error) -> io::Result<()> {
    if e.kind() == io::ErrorKind::BrokenPipe {
        Ok(())
    } else {
        Err(e)
    }
}

fn enumerate(global: &Global) -> Result<(), CliError> {
    if global.input.is_some() {
        return Err(CliError::Usage(
            "enumerate generates graphs; --in is not accepted".into(),
        ));
    }
    let mut text = Vec::new();
    for n in global.require_n()? {
        let graphs = match global.edges() {
            Some(m) => Generator::new(n)
                .map_err(PipelineError::from)?
                .with_edges(m)
                .map_err(PipelineError::from)?,
            None => Generator::new(n).map_err(PipelineError::from)?.all(),
        };
        write_graph6(graphs, &mut text).expect("writing to memory");
    }
    global.emit(std::str::from_utf8(&text).expect("graph6 is ASCII"))
}

fn fingerprint(global: &Global) -> Result<(), CliError> {
    let dir = global
        .out
        .as_deref()
        .ok_or_else(|| CliError::Usage("fingerprint needs --out DIR".into()))?;
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let kind = Kind::from(global.kind);
    let config = global.config(kind, false);
    let shards: Vec<(usize, EdgeCount, Vec<copermanental::Graph>)> = match &global.input {
        Some(path) => {
            let ns: Option<Vec<usize>> = global.n.clone().map(Iterator::collect);
            ingest_shards(path, ns.as_deref(), global.edges())?
                .into_iter()
                .flat_map(|(n, by_m)| by_m.into_iter().map(move |(m, gs)| (n, m, gs)))
                .collect()
        }
        None => {
            let mut all = Vec::new();
            for n in global.require_n()? {
                all.extend(
                    builtin_shards(n, global.edges())?
                        .into_iter()
                        .map(|(m, gs)| (n, m, gs)),
                );
            }
            all
        }
    };
    let mut listing = String::new();
    for (n, m, graphs) in shards {
        let records = shard_records(&graphs, config)?;
        for (pk, recs) in [
            (PolyKind::Permanental, records.perm),
            (PolyKind::Characteristic, records.char),
        ] {
            if !kind.wants(pk) {
                continue;
            }
            let path = dir.join(run_name(pk, n, m));
            let count = persist_fingerprints(recs, n, m, &path).map_err(PipelineError::from)?;
            listing.push_str(&format!("{}\t{count}\n", path.display()));
        }
    }
    io::stdout()
        .write_all(listing.as_bytes())
        .or_else(ignore_broken_pipe)
        .map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })
}

fn run_name(kind: PolyKind, n: usize, m: EdgeCount) -> String {
    format!("{}-n{n}-m{m}.run", kind.label())
}

fn merge(global: &Global, runs: &[PathBuf], stats: bool, all: bool) -> Result<(), CliError> {
    let families = merge_sorted_runs(runs).map_err(PipelineError::from)?;
    let mut text = String::new();
    if stats {
        text.push_str(&report::per_edge_header(PolyKind::Permanental).replace("perm_pols", "pols"));
        let mut shard: Vec<FamilyRecord> = Vec::new();
        for fam in families {
            let fam = fam.map_err(PipelineError::from)?;
            if shard.last().is_some_and(|last| {
                (last.fingerprint.n(), last.fingerprint.m())
                    != (fam.fingerprint.n(), fam.fingerprint.m())
            }) {
                report::per_edge_row(&mut text, &shard_stats(&shard));
                shard.clear();
            }
            shard.push(fam);
        }
        if !shard.is_empty() {
            report::per_edge_row(&mut text, &shard_stats(&shard));
        }
    } else {
        text.push_str(report::family_header());
        for fam in families {
            let fam = fam.map_err(PipelineError::from)?;
            if all || fam.size() >= 2 {
                report::family_row(&mut text, "run", &fam);
            }
        }
    }
    global.emit(&text)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let global = &cli.global;
    match cli.command {
        Command::Enumerate => enumerate(global),
        Command::Poly { graphs } => {
            let mode = global.config(Kind::Perm, false).mode;
            let mut text = String::new();
            for word in &graphs {
                text.push_str(&report::poly_report(word, global.kind.into(), mode)?);
            }
            global.emit(&text)
        }
        Command::Table { per_edge, dedup } => {
            let kind = global.kind.into();
            let levels = global.levels(global.config(kind, dedup))?;
            global.emit(&report::table_report(&levels, kind, per_edge))
        }
        Command::Mates { dedup } => {
            let kind = global.kind.into();
            let levels = global.levels(global.config(kind, dedup))?;
            global.emit(&report::mates_report(&levels, kind))
        }
        Command::Compare { dedup } => {
            let levels = global.levels(global.config(Kind::Both, dedup))?;
            global.emit(&report::compare_report(&levels))
        }
        Command::Fingerprint => fingerprint(global),
        Command::Merge { runs, stats, all } => merge(global, &runs, stats, all),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = cli.global.workers {
        if workers == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(5);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

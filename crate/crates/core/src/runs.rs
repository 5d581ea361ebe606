//! Sorted fingerprint runs on disk and their k-way merge.
//!
//! File layout, all integers little-endian:
//!
//! ```text
//! header:  "CPRM" | version u16 | n u8 | m u16 | record count u64
//! record:  fingerprint bytes | graph6 length u8 | graph6 bytes
//! ```
//!
//! Records are sorted by `(fingerprint bytes, graph6 bytes)`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::collide::{FamilyRecord, PolyFingerprint};
use crate::graph::EdgeCount;

pub const MAGIC: &[u8; 4] = b"CPRM";
pub const FORMAT_VERSION: u16 = 1;
pub const HEADER_LEN: usize = 17;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: record {index} is out of order")]
    UnsortedRun { path: PathBuf, index: u64 },
    #[error("{path}: {reason}")]
    BadRunFile { path: PathBuf, reason: String },
    #[error("record for (n={got_n}, m={got_m}) written to a run for (n={n}, m={m})")]
    ShardViolation {
        n: usize,
        m: EdgeCount,
        got_n: usize,
        got_m: EdgeCount,
    },
    #[error("graph {0} appears twice in one family")]
    DuplicateMember(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunHeader {
    pub n: usize,
    pub m: EdgeCount,
    pub count: u64,
}

type Record = (PolyFingerprint, String);

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> RunError + '_ {
    move |source| RunError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Sorts `records` and writes them as one run for shard `(n, m)`.
/// Returns the number of records written.
pub fn persist_fingerprints(
    mut records: Vec<Record>,
    n: usize,
    m: EdgeCount,
    path: impl AsRef<Path>,
) -> Result<u64, RunError> {
    let path = path.as_ref();
    for (fp, word) in &records {
        if fp.n() != n || fp.m() != m {
            return Err(RunError::ShardViolation {
                n,
                m,
                got_n: fp.n(),
                got_m: fp.m(),
            });
        }
        if word.len() > u8::MAX as usize {
            return Err(RunError::BadRunFile {
                path: path.to_path_buf(),
                reason: format!("graph6 word of {} bytes", word.len()),
            });
        }
    }
    records.sort_unstable();

    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    let mut header = Vec::with_capacity(HEADER_LEN);
    header.extend_from_slice(MAGIC);
    header.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    header.push(n as u8);
    header.extend_from_slice(&m.0.to_le_bytes());
    header.extend_from_slice(&(records.len() as u64).to_le_bytes());
    out.write_all(&header).map_err(io_err(path))?;
    for (fp, word) in &records {
        out.write_all(fp.as_bytes()).map_err(io_err(path))?;
        out.write_all(&[word.len() as u8]).map_err(io_err(path))?;
        out.write_all(word.as_bytes()).map_err(io_err(path))?;
    }
    out.flush().map_err(io_err(path))?;
    Ok(records.len() as u64)
}

/// Streams the records of one run, checking order and the declared count.
pub struct RunReader {
    path: PathBuf,
    input: BufReader<File>,
    header: RunHeader,
    read: u64,
    last: Option<Record>,
}

impl RunReader {
    pub fn open(path: impl AsRef<Path>) -> Result<RunReader, RunError> {
        let path = path.as_ref().to_path_buf();
        let file = File::open(&path).map_err(io_err(&path))?;
        let mut input = BufReader::new(file);
        let mut raw = [0u8; HEADER_LEN];
        input
            .read_exact(&mut raw)
            .map_err(|_| RunError::BadRunFile {
                path: path.clone(),
                reason: "truncated header".into(),
            })?;
        if &raw[..4] != MAGIC {
            return Err(RunError::BadRunFile {
                path,
                reason: "bad magic".into(),
            });
        }
        let version = u16::from_le_bytes([raw[4], raw[5]]);
        if version != FORMAT_VERSION {
            return Err(RunError::BadRunFile {
                path,
                reason: format!("unsupported version {version}"),
            });
        }
        let header = RunHeader {
            n: raw[6] as usize,
            m: EdgeCount(u16::from_le_bytes([raw[7], raw[8]])),
            count: u64::from_le_bytes(raw[9..17].try_into().expect("8 bytes")),
        };
        Ok(RunReader {
            path,
            input,
            header,
            read: 0,
            last: None,
        })
    }

    pub fn header(&self) -> RunHeader {
        self.header
    }

    fn bad(&self, reason: impl Into<String>) -> RunError {
        RunError::BadRunFile {
            path: self.path.clone(),
            reason: reason.into(),
        }
    }

    fn read_record(&mut self) -> Result<Record, RunError> {
        let truncated = |r: &RunReader| r.bad(format!("truncated record {}", r.read));
        let mut buf = vec![0u8; 3];
        self.input
            .read_exact(&mut buf)
            .map_err(|_| truncated(self))?;
        let n = buf[0] as usize;
        for _ in 0..n.saturating_sub(1) {
            let mut sl = [0u8; 2];
            self.input
                .read_exact(&mut sl)
                .map_err(|_| truncated(self))?;
            buf.extend_from_slice(&sl);
            let start = buf.len();
            buf.resize(start + sl[1] as usize, 0);
            self.input
                .read_exact(&mut buf[start..])
                .map_err(|_| truncated(self))?;
        }
        let fp = PolyFingerprint::from_bytes(buf)
            .map_err(|e| self.bad(format!("record {}: {e}", self.read)))?;
        if fp.n() != self.header.n || fp.m() != self.header.m {
            return Err(RunError::ShardViolation {
                n: self.header.n,
                m: self.header.m,
                got_n: fp.n(),
                got_m: fp.m(),
            });
        }
        let mut len = [0u8; 1];
        self.input
            .read_exact(&mut len)
            .map_err(|_| truncated(self))?;
        let mut word = vec![0u8; len[0] as usize];
        self.input
            .read_exact(&mut word)
            .map_err(|_| truncated(self))?;
        let word = String::from_utf8(word)
            .map_err(|_| self.bad(format!("record {}: graph6 is not ASCII", self.read)))?;
        Ok((fp, word))
    }
}

impl Iterator for RunReader {
    type Item = Result<Record, RunError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.read == self.header.count {
            let mut probe = [0u8; 1];
            return match self.input.read(&mut probe) {
                Ok(0) => None,
                Ok(_) => {
                    self.read += 1;
                    Some(Err(self.bad("data after the declared record count")))
                }
                Err(source) => Some(Err(RunError::Io {
                    path: self.path.clone(),
                    source,
                })),
            };
        }
        if self.read > self.header.count {
            return None;
        }
        let record = match self.read_record() {
            Ok(r) => r,
            Err(e) => {
                self.read = self.header.count + 1;
                return Some(Err(e));
            }
        };
        if self.last.as_ref().is_some_and(|last| *last > record) {
            let index = self.read;
            self.read = self.header.count + 1;
            return Some(Err(RunError::UnsortedRun {
                path: self.path.clone(),
                index,
            }));
        }
        self.read += 1;
        self.last = Some(record.clone());
        Some(Ok(record))
    }
}

/// Families in fingerprint order, produced from a k-way merge of runs.
pub struct FamilyStream {
    readers: Vec<RunReader>,
    heap: BinaryHeap<Reverse<(Record, usize)>>,
    pending: Option<Record>,
    failed: bool,
}

impl FamilyStream {
    fn pull(&mut self, idx: usize) -> Result<(), RunError> {
        if let Some(next) = self.readers[idx].next() {
            self.heap.push(Reverse((next?, idx)));
        }
        Ok(())
    }

    fn next_record(&mut self) -> Result<Option<Record>, RunError> {
        if let Some(r) = self.pending.take() {
            return Ok(Some(r));
        }
        let Some(Reverse((record, idx))) = self.heap.pop() else {
            return Ok(None);
        };
        self.pull(idx)?;
        Ok(Some(record))
    }

    fn next_family(&mut self) -> Result<Option<FamilyRecord>, RunError> {
        let Some((fingerprint, word)) = self.next_record()? else {
            return Ok(None);
        };
        let mut members = vec![word];
        while let Some((fp, word)) = self.next_record()? {
            if fp != fingerprint {
                self.pending = Some((fp, word));
                break;
            }
            if members.last() == Some(&word) {
                return Err(RunError::DuplicateMember(word));
            }
            members.push(word);
        }
        Ok(Some(FamilyRecord {
            fingerprint,
            members,
        }))
    }
}

impl Iterator for FamilyStream {
    type Item = Result<FamilyRecord, RunError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        match self.next_family() {
            Ok(f) => f.map(Ok),
            Err(e) => {
                self.failed = true;
                Some(Err(e))
            }
        }
    }
}

/// Opens every run and merges them. Grouping the result equals grouping
/// the union of the runs in memory.
pub fn merge_sorted_runs<P: AsRef<Path>>(paths: &[P]) -> Result<FamilyStream, RunError> {
    let readers = paths
        .iter()
        .map(RunReader::open)
        .collect::<Result<Vec<_>, _>>()?;
    let mut stream = FamilyStream {
        readers,
        heap: BinaryHeap::new(),
        pending: None,
        failed: false,
    };
    for idx in 0..stream.readers.len() {
        stream.pull(idx)?;
    }
    Ok(stream)
}

//! graph6 short-form codec.
//!
//! A word is `N(n)` followed by the upper triangle of the adjacency matrix,
//! column by column (`(0,1), (0,2), (1,2), (0,3), ...`), packed big-endian
//! into 6-bit groups, each group offset by 63. Only `n <= 32` is accepted, so
//! `N(n)` is always the single byte `n + 63`.

use thiserror::Error;

use crate::graph::{Graph, MAX_VERTICES};

const HEADER: &str = ">>graph6<<";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("byte {byte:#04x} at offset {offset} is outside the graph6 range 63..=126")]
    InvalidChar { offset: usize, byte: u8 },
    #[error("graph on {n} vertices needs {expected} body bytes, found {found}")]
    TruncatedBody {
        n: usize,
        expected: usize,
        found: usize,
    },
    #[error("unexpected data after the graph body: {0}")]
    TrailingGarbage(String),
    #[error("graph6 word declares {0} vertices; at most {MAX_VERTICES} supported")]
    TooLarge(usize),
    #[error("empty graph6 word")]
    Empty,
}

fn body_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

pub fn parse_graph6(text: &str) -> Result<Graph, Graph6Error> {
    if text.starts_with(HEADER) {
        return Err(Graph6Error::TrailingGarbage(
            "graph6 header is not accepted".into(),
        ));
    }
    let bytes = text.as_bytes();
    for (offset, &byte) in bytes.iter().enumerate() {
        if !(63..=126).contains(&byte) {
            return Err(Graph6Error::InvalidChar { offset, byte });
        }
    }
    let (&first, body) = bytes.split_first().ok_or(Graph6Error::Empty)?;
    if first == 126 {
        // long-form size prefix; only reachable for n >= 63
        return Err(Graph6Error::TooLarge(63));
    }
    let n = (first - 63) as usize;
    if n > MAX_VERTICES {
        return Err(Graph6Error::TooLarge(n));
    }
    let expected = body_len(n);
    if body.len() < expected {
        return Err(Graph6Error::TruncatedBody {
            n,
            expected,
            found: body.len(),
        });
    }
    if body.len() > expected {
        return Err(Graph6Error::TrailingGarbage(format!(
            "{} extra byte(s)",
            body.len() - expected
        )));
    }

    let mut g = Graph::empty(n).expect("n checked above");
    let mut k = 0usize;
    for j in 1..n {
        for i in 0..j {
            let group = body[k / 6] - 63;
            if group >> (5 - k % 6) & 1 == 1 {
                g.set_edge(i, j);
            }
            k += 1;
        }
    }
    if k % 6 != 0 {
        let pad = (body[k / 6] - 63) & ((1u8 << (6 - k % 6)) - 1);
        if pad != 0 {
            return Err(Graph6Error::TrailingGarbage("nonzero padding bits".into()));
        }
    }
    Ok(g)
}

pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::with_capacity(1 + body_len(n));
    out.push(n as u8 + 63);
    let mut group = 0u8;
    let mut k = 0usize;
    for j in 1..n {
        for i in 0..j {
            group = group << 1 | g.has_edge(i, j) as u8;
            k += 1;
            if k % 6 == 0 {
                out.push(group + 63);
                group = 0;
            }
        }
    }
    if k % 6 != 0 {
        out.push((group << (6 - k % 6)) + 63);
    }
    String::from_utf8(out).expect("graph6 output is ASCII")
}

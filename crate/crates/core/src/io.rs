//! Edge-list and partition file formats.
//!
//! Edge list: a header line `n m`, then `m` lines `i j w` with
//! `0 ≤ i < j < n` and `w > 0`, fields separated by whitespace. Written
//! files use tabs and the shortest float representation that round-trips.
//!
//! Partition: one integer label per line, vertex `i` on line `i + 1`.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Partition, WeightedGraph};

fn parse_error<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        column,
        message: message.into(),
    })
}

/// Whitespace-separated fields of a line with their 1-based columns.
fn fields(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (idx, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((col, idx)),
            (true, Some((c, s))) => {
                out.push((c + 1, &line[s..idx]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((c, s)) = start {
        out.push((c + 1, &line[s..]));
    }
    out
}

fn field<T: FromStr>(line: usize, (column, text): (usize, &str), what: &str) -> Result<T> {
    text.parse()
        .or_else(|_| parse_error(line, column, format!("expected {what}, found '{text}'")))
}

/// Lines of `text`, allowing a single trailing newline and CRLF endings.
fn lines(text: &str) -> Vec<&str> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    if body.is_empty() {
        return Vec::new();
    }
    body.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l)).collect()
}

pub fn parse_edge_list(text: &str) -> Result<WeightedGraph> {
    let lines = lines(text);
    let Some(header) = lines.first() else {
        return parse_error(1, 1, "missing header line 'n m'");
    };
    let hf = fields(header);
    if hf.len() != 2 {
        return parse_error(1, 1, format!("header must have 2 fields 'n m', found {}", hf.len()));
    }
    let n: usize = field(1, hf[0], "vertex count")?;
    let m: usize = field(1, hf[1], "edge count")?;
    if lines.len() - 1 != m {
        let line = lines.len().min(m + 1) + 1;
        return parse_error(line, 1, format!("header declares {m} edges, found {}", lines.len() - 1));
    }
    let mut edges = Vec::with_capacity(m);
    let mut seen = HashSet::with_capacity(m);
    for (idx, raw) in lines.iter().enumerate().skip(1) {
        let line = idx + 1;
        let f = fields(raw);
        if f.len() != 3 {
            let column = f.get(3).map_or(1, |x| x.0);
            return parse_error(line, column, format!("expected 3 fields 'i j w', found {}", f.len()));
        }
        let i: usize = field(line, f[0], "vertex index")?;
        let j: usize = field(line, f[1], "vertex index")?;
        let w: f64 = field(line, f[2], "weight")?;
        if i >= j {
            return parse_error(line, f[1].0, format!("need i < j, got {i} {j}"));
        }
        if j >= n {
            return parse_error(line, f[1].0, format!("vertex {j} out of range for n = {n}"));
        }
        if !(w.is_finite() && w > 0.0) {
            return parse_error(line, f[2].0, format!("weight must be finite and positive, got {}", f[2].1));
        }
        if !seen.insert((i, j)) {
            return parse_error(line, f[0].0, format!("duplicate edge {i} {j}"));
        }
        edges.push((i, j, w));
    }
    WeightedGraph::from_edges(n, &edges)
}

pub fn write_edge_list(g: &WeightedGraph) -> String {
    let edges = g.edges();
    let mut s = format!("{} {}\n", g.n(), edges.len());
    for (i, j, w) in edges {
        writeln!(s, "{i}\t{j}\t{w}").expect("writing to a String");
    }
    s
}

pub fn parse_partition(text: &str) -> Result<Partition> {
    let mut labels = Vec::new();
    for (idx, raw) in lines(text).iter().enumerate() {
        let f = fields(raw);
        if f.len() != 1 {
            let column = f.get(1).map_or(1, |x| x.0);
            return parse_error(idx + 1, column, format!("expected one label, found {} fields", f.len()));
        }
        labels.push(field::<usize>(idx + 1, f[0], "nonnegative integer label")?);
    }
    if labels.is_empty() {
        return parse_error(1, 1, "empty partition file");
    }
    Partition::new(labels)
}

pub fn write_partition(p: &Partition) -> String {
    let mut s = String::with_capacity(3 * p.n());
    for &l in p.labels() {
        writeln!(s, "{l}").expect("writing to a String");
    }
    s
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    parse_edge_list(&fs::read_to_string(path)?)
}

pub fn read_partition(path: impl AsRef<Path>) -> Result<Partition> {
    parse_partition(&fs::read_to_string(path)?)
}

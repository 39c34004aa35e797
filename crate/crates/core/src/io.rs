//! Plain-text formats. Node ids and labels are 1-based on disk and 0-based in
//! memory; this module is the only place that converts between the two.
//!
//! Hypergraph: a header line `n d`, then one edge per line as `d`
//! space-separated ascending node ids. Assignment: `n` lines, line `i` holding
//! the label of node `i`. Blank lines and lines starting with `#` are skipped.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::assignment::Assignment;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

fn content_lines<R: BufRead>(reader: R) -> impl Iterator<Item = (usize, std::io::Result<String>)> {
    reader
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            l.as_ref()
                .map(|s| {
                    let t = s.trim();
                    !t.is_empty() && !t.starts_with('#')
                })
                .unwrap_or(true)
        })
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

fn parse_ids(path: &Path, line: usize, text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| parse_err(path, line, format!("not a positive integer: {tok:?}")))
        })
        .collect()
}

pub fn read_hypergraph_from<R: BufRead>(reader: R, path: &Path) -> Result<Hypergraph> {
    let mut lines = content_lines(reader);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(path, 0, "missing `n d` header"))?;
    let header = parse_ids(path, hline, &header?)?;
    let [n, d] = header[..] else {
        return Err(parse_err(path, hline, "header must be `n d`"));
    };
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (line, text) in lines {
        let mut ids = parse_ids(path, line, &text?)?;
        if ids.len() != d {
            return Err(parse_err(path, line, format!("expected {d} node ids, got {}", ids.len())));
        }
        if let Some(&bad) = ids.iter().find(|&&v| v == 0 || v > n) {
            return Err(parse_err(path, line, format!("node id {bad} outside 1..={n}")));
        }
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(parse_err(path, line, "repeated node in edge"));
        }
        if !seen.insert(ids.clone()) {
            return Err(parse_err(path, line, "duplicate edge"));
        }
        edges.push(ids.into_iter().map(|v| v - 1).collect::<Vec<_>>());
    }
    Hypergraph::new(n, d, edges).map_err(|e| parse_err(path, 0, e.to_string()))
}

pub fn read_hypergraph(path: &Path) -> Result<Hypergraph> {
    read_hypergraph_from(BufReader::new(File::open(path)?), path)
}

pub fn write_hypergraph_to<W: Write>(g: &Hypergraph, mut w: W) -> Result<()> {
    writeln!(w, "{} {}", g.n(), g.d())?;
    let mut line = String::new();
    for e in g.edges() {
        line.clear();
        for (pos, v) in e.iter().enumerate() {
            if pos > 0 {
                line.push(' ');
            }
            line.push_str(&(v + 1).to_string());
        }
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_hypergraph(g: &Hypergraph, path: &Path) -> Result<()> {
    write_hypergraph_to(g, BufWriter::new(File::create(path)?))
}

/// Reads an assignment. With `k = None` the cluster count is the largest
/// label present.
pub fn read_assignment_from<R: BufRead>(reader: R, path: &Path, k: Option<usize>) -> Result<Assignment> {
    let mut labels = Vec::new();
    for (line, text) in content_lines(reader) {
        let text = text?;
        let l: usize = text
            .trim()
            .parse()
            .map_err(|_| parse_err(path, line, format!("not a positive label: {:?}", text.trim())))?;
        if l == 0 {
            return Err(parse_err(path, line, "labels are 1-based"));
        }
        labels.push((l - 1) as u32);
    }
    let k = k.unwrap_or_else(|| labels.iter().max().map_or(1, |&m| m as usize + 1));
    Assignment::new(labels, k).map_err(|e| parse_err(path, 0, e.to_string()))
}

pub fn read_assignment(path: &Path, k: Option<usize>) -> Result<Assignment> {
    read_assignment_from(BufReader::new(File::open(path)?), path, k)
}

pub fn write_assignment_to<W: Write>(h: &Assignment, mut w: W) -> Result<()> {
    for &l in h.labels() {
        writeln!(w, "{}", l + 1)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_assignment(h: &Assignment, path: &Path) -> Result<()> {
    write_assignment_to(h, BufWriter::new(File::create(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypergraph_text_round_trip() {
        let text = "# demo\n5 3\n1 2 3\n\n2 4 5\n";
        let g = read_hypergraph_from(text.as_bytes(), Path::new("demo")).unwrap();
        assert_eq!(g.n(), 5);
        assert!(g.contains(&[0, 1, 2]));
        let mut out = Vec::new();
        write_hypergraph_to(&g, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "5 3\n1 2 3\n2 4 5\n");
    }

    #[test]
    fn hypergraph_parse_errors_carry_line_numbers() {
        let err = read_hypergraph_from("4 3\n1 2\n".as_bytes(), Path::new("g")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = read_hypergraph_from("4 3\n1 2 5\n".as_bytes(), Path::new("g")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(read_hypergraph_from("".as_bytes(), Path::new("g")).is_err());
    }

    #[test]
    fn assignment_is_one_based_on_disk() {
        let h = read_assignment_from("2\n1\n2\n1\n".as_bytes(), Path::new("a"), None).unwrap();
        assert_eq!(h.labels(), &[1, 0, 1, 0]);
        assert_eq!(h.k(), 2);
        let mut out = Vec::new();
        write_assignment_to(&h, &mut out).unwrap();
        assert_eq!(out, b"2\n1\n2\n1\n");
        assert!(read_assignment_from("0\n".as_bytes(), Path::new("a"), None).is_err());
    }
}

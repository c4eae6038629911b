//! Readers and writers for Matrix Market coordinate files and plain edge
//! lists, plus permutation files.
//!
//! Matrix Market indices are 1-based. Edge lists are 0-based: each data line
//! is `u v`, `#` starts a comment, and an optional line holding a single
//! integer declares the vertex count (otherwise `max id + 1`).

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    MatrixMarket,
    EdgeList,
}

impl Format {
    /// Guess from a file name: `.mtx` is Matrix Market, anything else an edge list.
    pub fn from_path(path: &str) -> Format {
        if path.to_ascii_lowercase().ends_with(".mtx") {
            Format::MatrixMarket
        } else {
            Format::EdgeList
        }
    }
}

pub fn read_graph<R: BufRead>(reader: R, format: Format) -> Result<Graph> {
    match format {
        Format::MatrixMarket => read_matrix_market(reader),
        Format::EdgeList => read_edge_list(reader),
    }
}

pub fn write_graph<W: Write>(writer: W, g: &Graph, format: Format) -> Result<()> {
    match format {
        Format::MatrixMarket => write_matrix_market(writer, g),
        Format::EdgeList => write_edge_list(writer, g),
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.parse().map_err(|_| {
        parse_err(
            line,
            format!("expected a non-negative integer, found `{tok}`"),
        )
    })
}

/// Read the sparsity pattern of a square Matrix Market coordinate matrix as
/// an undirected graph. Values are ignored; general matrices are symmetrized.
pub fn read_matrix_market<R: BufRead>(reader: R) -> Result<Graph> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let header = header?;
    let toks: Vec<String> = header
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if toks.len() < 4 || toks[0] != "%%matrixmarket" || toks[1] != "matrix" {
        return Err(parse_err(1, "missing `%%MatrixMarket matrix` banner"));
    }
    if toks[2] != "coordinate" {
        return Err(parse_err(1, format!("unsupported storage `{}`", toks[2])));
    }

    let mut size: Option<(usize, usize)> = None;
    let mut expected = 0usize;
    let mut edges = Vec::new();
    for (ln, line) in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let f: Vec<&str> = t.split_whitespace().collect();
        match size {
            None => {
                if f.len() != 3 {
                    return Err(parse_err(ln, "size line must be `rows cols entries`"));
                }
                let (r, c) = (parse_usize(f[0], ln)?, parse_usize(f[1], ln)?);
                if r != c {
                    return Err(Error::NonSquare { rows: r, cols: c });
                }
                size = Some((r, c));
                expected = parse_usize(f[2], ln)?;
                edges.reserve(expected);
            }
            Some((n, _)) => {
                if f.len() < 2 {
                    return Err(parse_err(ln, "entry needs a row and a column"));
                }
                let (i, j) = (parse_usize(f[0], ln)?, parse_usize(f[1], ln)?);
                for id in [i, j] {
                    if id == 0 || id > n {
                        return Err(Error::VertexOutOfRange { id, n });
                    }
                }
                edges.push((i - 1, j - 1));
            }
        }
    }
    let (n, _) = size.ok_or_else(|| parse_err(1, "missing size line"))?;
    if edges.len() != expected {
        return Err(parse_err(
            0,
            format!("expected {expected} entries, found {}", edges.len()),
        ));
    }
    Graph::from_edges(n, edges)
}

pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let mut declared: Option<usize> = None;
    let mut edges = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let ln = i + 1;
        let line = line?;
        let t = line.split('#').next().unwrap_or("").trim();
        if t.is_empty() {
            continue;
        }
        let f: Vec<&str> = t.split_whitespace().collect();
        match f.len() {
            1 => {
                if declared.is_some() {
                    return Err(parse_err(ln, "vertex count declared twice"));
                }
                declared = Some(parse_usize(f[0], ln)?);
            }
            2 => edges.push((parse_usize(f[0], ln)?, parse_usize(f[1], ln)?)),
            _ => return Err(parse_err(ln, "expected `u v`")),
        }
    }
    let n = match declared {
        Some(n) => n,
        None => edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0),
    };
    Graph::from_edges(n, edges)
}

pub fn write_matrix_market<W: Write>(mut w: W, g: &Graph) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate pattern symmetric")?;
    writeln!(w, "{} {} {}", g.n(), g.n(), g.m())?;
    for (u, v) in g.edges() {
        // lower triangle, as the format expects for symmetric storage
        writeln!(w, "{} {}", v + 1, u + 1)?;
    }
    Ok(())
}

pub fn write_edge_list<W: Write>(mut w: W, g: &Graph) -> Result<()> {
    writeln!(w, "{}", g.n())?;
    for (u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

/// Read a permutation file: one vertex id per line in the first column,
/// further columns (e.g. logged degrees) ignored. The result is not
/// validated; see [`check_permutation`].
pub fn read_permutation<R: BufRead>(reader: R) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.split('#').next().unwrap_or("").trim();
        if let Some(tok) = t.split_whitespace().next() {
            out.push(parse_usize(tok, i + 1)?);
        }
    }
    Ok(out)
}

/// Write an ordering, optionally with a second column of per-step degrees.
pub fn write_permutation<W: Write>(
    mut w: W,
    order: &[usize],
    degrees: Option<&[usize]>,
) -> Result<()> {
    for (t, v) in order.iter().enumerate() {
        match degrees {
            Some(d) => writeln!(w, "{v} {}", d[t])?,
            None => writeln!(w, "{v}")?,
        }
    }
    Ok(())
}

/// Check that `perm` lists every vertex of `0..n` exactly once.
pub fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::NotPermutation(format!(
            "length {} but the graph has {n} vertices",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &v in perm {
        if v >= n {
            return Err(Error::NotPermutation(format!("vertex {v} out of range")));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::NotPermutation(format!("vertex {v} repeated")));
        }
    }
    Ok(())
}

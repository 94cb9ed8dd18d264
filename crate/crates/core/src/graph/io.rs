//! Plain-text edge lists.
//!
//! ```text
//! n <count>
//! u v
//! u v
//! ```
//!
//! The edge id is the order of the edge line. The colored variant appends a
//! color to each line, with `-1` marking an uncolored (deleted) edge.

use std::io::{BufRead, Write};

use super::Graph;
use crate::error::{Error, Result};

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        msg: msg.into(),
    })
}

fn parse_lines<R: BufRead>(reader: R, columns: usize) -> Result<(usize, Vec<Vec<i64>>)> {
    let mut n = None;
    let mut rows = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        if n.is_none() {
            let mut parts = text.split_whitespace();
            match (parts.next(), parts.next(), parts.next()) {
                (Some("n"), Some(count), None) => match count.parse::<usize>() {
                    Ok(c) => n = Some(c),
                    Err(_) => return parse_err(lineno, format!("bad vertex count {count:?}")),
                },
                _ => return parse_err(lineno, "expected header `n <count>`"),
            }
            continue;
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != columns {
            return parse_err(
                lineno,
                format!("expected {columns} fields, found {}", fields.len()),
            );
        }
        let mut row = Vec::with_capacity(columns);
        for f in fields {
            match f.parse::<i64>() {
                Ok(x) => row.push(x),
                Err(_) => return parse_err(lineno, format!("bad integer {f:?}")),
            }
        }
        let count = n.unwrap() as i64;
        if row[0] < 0 || row[1] < 0 || row[0] >= count || row[1] >= count {
            return parse_err(lineno, format!("vertex out of range 0..{count}"));
        }
        rows.push(row);
    }
    match n {
        Some(n) => Ok((n, rows)),
        None => parse_err(0, "missing header `n <count>`"),
    }
}

pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let (n, rows) = parse_lines(reader, 2)?;
    let edges = rows
        .iter()
        .map(|r| (r[0] as usize, r[1] as usize))
        .collect();
    Graph::from_edges(n, edges)
}

pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "n {}", g.n())?;
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

/// Reads `u v color` lines; a color of `-1` becomes `None`.
pub fn read_colored_edge_list<R: BufRead>(reader: R) -> Result<(Graph, Vec<Option<usize>>)> {
    let (n, rows) = parse_lines(reader, 3)?;
    let mut colors = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        colors.push(match r[2] {
            -1 => None,
            c if c >= 0 => Some(c as usize),
            c => return parse_err(i + 2, format!("bad color {c}")),
        });
    }
    let edges = rows
        .iter()
        .map(|r| (r[0] as usize, r[1] as usize))
        .collect();
    Ok((Graph::from_edges(n, edges)?, colors))
}

pub fn write_colored_edge_list<W: Write>(
    g: &Graph,
    colors: &[Option<usize>],
    mut out: W,
) -> Result<()> {
    writeln!(out, "n {}", g.n())?;
    for (&(u, v), c) in g.edges().iter().zip(colors) {
        match c {
            Some(c) => writeln!(out, "{u} {v} {c}")?,
            None => writeln!(out, "{u} {v} -1")?,
        }
    }
    Ok(())
}

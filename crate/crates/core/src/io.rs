//! Text formats.
//!
//! Edge list: a header line `n <count>` followed by one `u v w` triple per
//! line, whitespace separated, 1-based vertices. Blank lines and `#`
//! comments are ignored.
//!
//! Dense matrices: CSV with one row per line, or a JSON array of rows.
//! Vectors: comma and/or whitespace separated numbers over any number of
//! lines, or a JSON array. Numbers are written in the shortest form that
//! reads back to the same `f64`.

use std::fmt::Write;

use nalgebra::DMatrix;

use crate::error::{ParseError, Result};
use crate::graph::WeightedGraph;

/// Non-blank, non-comment lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("");
        (!body.trim().is_empty()).then_some((i + 1, body))
    })
}

/// Whitespace-separated tokens with 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn number(tok: &str, line: usize, col: usize) -> Result<f64, ParseError> {
    match tok.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(ParseError::new(line, col, format!("expected a finite number, found {tok:?}"))),
    }
}

fn vertex(tok: &str, n: usize, line: usize, col: usize) -> Result<usize, ParseError> {
    match tok.parse::<usize>() {
        Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
        Ok(v) => Err(ParseError::new(line, col, format!("vertex {v} out of range 1..={n}"))),
        Err(_) => Err(ParseError::new(line, col, format!("expected a vertex index, found {tok:?}"))),
    }
}

pub fn parse_edge_list(text: &str) -> Result<WeightedGraph> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| ParseError::new(1, 0, "missing header `n <count>`"))?;
    let n = match tokens(header).as_slice() {
        [(_, "n"), (col, count)] => count
            .parse::<usize>()
            .map_err(|_| ParseError::new(hline, *col, format!("expected a vertex count, found {count:?}")))?,
        _ => return Err(ParseError::new(hline, 0, "expected header `n <count>`").into()),
    };
    if n < 2 {
        return Err(ParseError::new(hline, 0, format!("graph needs at least 2 vertices, got {n}")).into());
    }
    let mut edges = Vec::new();
    let mut seen = std::collections::BTreeMap::new();
    for (ln, line) in lines {
        let toks = tokens(line);
        let [(cu, u), (cv, v), (cw, w)] = toks.as_slice() else {
            return Err(ParseError::new(ln, 0, format!("expected `u v w`, found {} fields", toks.len())).into());
        };
        let u = vertex(u, n, ln, *cu)?;
        let v = vertex(v, n, ln, *cv)?;
        let w = number(w, ln, *cw)?;
        if u == v {
            return Err(ParseError::new(ln, *cv, format!("self-loop at vertex {}", u + 1)).into());
        }
        if w <= 0.0 {
            return Err(ParseError::new(ln, *cw, format!("edge weight must be positive, found {w}")).into());
        }
        if let Some(prev) = seen.insert((u.min(v), u.max(v)), ln) {
            return Err(ParseError::new(ln, 0, format!("duplicate edge {}-{} (first on line {prev})", u + 1, v + 1)).into());
        }
        edges.push((u, v, w));
    }
    WeightedGraph::new(n, edges)
}

pub fn write_edge_list(g: &WeightedGraph) -> String {
    let mut s = format!("n {}\n", g.n());
    for e in g.edges() {
        let _ = writeln!(s, "{} {} {}", e.u + 1, e.v + 1, e.w);
    }
    s
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, ParseError> {
    serde_json::from_str(text).map_err(|e| ParseError::new(e.line(), e.column(), e.to_string()))
}

fn is_json(text: &str) -> bool {
    text.trim_start().starts_with('[')
}

/// Rows of numbers, from CSV (comma or whitespace separated) or JSON.
pub fn parse_rows(text: &str) -> Result<Vec<Vec<f64>>> {
    if is_json(text) {
        return Ok(parse_json(text)?);
    }
    let mut rows = Vec::new();
    for (ln, line) in content_lines(text) {
        let mut row = Vec::new();
        let mut col = 1;
        for field in line.split(',') {
            let trimmed = field.trim();
            let offset = field.len() - field.trim_start().len();
            if trimmed.is_empty() {
                return Err(ParseError::new(ln, col, "empty field").into());
            }
            for (c, tok) in tokens(trimmed) {
                row.push(number(tok, ln, col + offset + c - 1)?);
            }
            col += field.len() + 1;
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Square matrix; ragged or non-square input is rejected with the line of
/// the first offending row.
pub fn parse_matrix(text: &str) -> Result<DMatrix<f64>> {
    let rows = parse_rows(text)?;
    let n = rows.len();
    if n == 0 {
        return Err(ParseError::new(1, 0, "empty matrix").into());
    }
    if let Some(bad) = rows.iter().position(|r| r.len() != n) {
        let msg = format!("row {} has {} entries, expected {n} for a square matrix", bad + 1, rows[bad].len());
        let line = if is_json(text) { 1 } else { content_lines(text).nth(bad).map_or(1, |(l, _)| l) };
        return Err(ParseError::new(line, 0, msg).into());
    }
    Ok(DMatrix::from_fn(n, n, |j, k| rows[j][k]))
}

/// Vector from a JSON array or from numbers spread over CSV lines.
pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    if is_json(text) {
        return Ok(parse_json(text)?);
    }
    Ok(parse_rows(text)?.into_iter().flatten().collect())
}

pub fn write_matrix_csv(m: &DMatrix<f64>) -> String {
    let mut s = String::new();
    for row in m.row_iter() {
        let fields: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        s.push_str(&fields.join(","));
        s.push('\n');
    }
    s
}

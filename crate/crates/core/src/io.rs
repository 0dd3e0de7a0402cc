//! Text formats: edge lists for input graphs and the `mgraph` format for
//! levelled graphs with their creation snapshots.
//!
//! Edge list: one `u v` pair per line, `#` comments and blank lines ignored.
//! A line holding a single label declares a vertex without edges.
//!
//! `mgraph`:
//!
//! ```text
//! mgraph <levels>
//! v <level> <id> <label>        one per vertex, by id
//! e <id> <id>                   one per edge, smaller id first, sorted
//! s <id> <level> <id>...        one per vertex x and level j < level(x), by (id, j)
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, GraphError, MultipartiteGraph, VertexId, VertexSet};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut g = Graph::new();
    let mut ids: BTreeMap<String, VertexId> = BTreeMap::new();
    let mut intern = |g: &mut Graph, label: &str| {
        *ids.entry(label.to_owned())
            .or_insert_with(|| g.add_vertex(label))
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match tokens.as_slice() {
            [v] => {
                intern(&mut g, v);
            }
            [a, b] => {
                if a == b {
                    return Err(err(line, format!("self-loop on {a}")));
                }
                let u = intern(&mut g, a);
                let v = intern(&mut g, b);
                if !g.add_edge(u, v).map_err(|e| err(line, e.to_string()))? {
                    return Err(err(line, format!("duplicate edge {a} {b}")));
                }
            }
            _ => {
                return Err(err(
                    line,
                    format!("expected two labels, found {} tokens", tokens.len()),
                ))
            }
        }
    }
    Ok(g)
}

/// Writes edges in id order, then any vertex without edges on its own line.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for e in g.edges() {
        let (u, v) = e.endpoints();
        let _ = writeln!(out, "{} {}", g.label(u).unwrap_or("?"), g.label(v).unwrap_or("?"));
    }
    for v in g.vertices() {
        if g.neighbourhood(v).is_ok_and(|n| n.is_empty()) {
            let _ = writeln!(out, "{}", g.label(v).unwrap_or("?"));
        }
    }
    out
}

pub fn write_mgraph(m: &MultipartiteGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "mgraph {}", m.level_count());
    for x in m.vertices() {
        let level = m.level_of(x).expect("own vertex");
        let _ = writeln!(out, "v {} {} {}", level, x, m.label(x).unwrap_or("?"));
    }
    for e in m.edges() {
        let (u, v) = e.endpoints();
        let _ = writeln!(out, "e {u} {v}");
    }
    for x in m.vertices() {
        let level = m.level_of(x).expect("own vertex");
        for j in 0..level {
            let _ = write!(out, "s {x} {j}");
            if let Some(s) = m.snapshot(x, j) {
                for y in s {
                    let _ = write!(out, " {y}");
                }
            }
            out.push('\n');
        }
    }
    out
}

#[derive(PartialEq, PartialOrd)]
enum Section {
    Vertices,
    Edges,
    Snapshots,
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, ParseError> {
    tok.parse()
        .map_err(|_| err(line, format!("bad {what} {tok:?}")))
}

pub fn parse_mgraph(text: &str) -> Result<MultipartiteGraph, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| err(1, "missing mgraph header"))?;
    let level_count = match header.split(' ').collect::<Vec<_>>().as_slice() {
        ["mgraph", n] => parse_num::<usize>(n, 1, "level count")?,
        _ => return Err(err(1, "expected `mgraph <levels>`")),
    };
    let mut m = MultipartiteGraph::with_levels(level_count);
    let mut section = Section::Vertices;
    let mut last_vertex: Option<VertexId> = None;
    let mut last_edge: Option<(VertexId, VertexId)> = None;
    let mut expected_snapshots: Vec<(VertexId, usize)> = Vec::new();
    let mut next_snapshot = 0;

    for (line, raw) in lines {
        let tokens: Vec<&str> = raw.split(' ').collect();
        let gerr = |e: GraphError| err(line, e.to_string());
        match tokens.as_slice() {
            ["v", level, id, label] if section == Section::Vertices => {
                let level: usize = parse_num(level, line, "level")?;
                let id = VertexId(parse_num(id, line, "vertex id")?);
                if last_vertex.is_some_and(|p| p >= id) {
                    return Err(err(line, "vertex ids must be strictly increasing"));
                }
                if label.is_empty() {
                    return Err(err(line, "empty label"));
                }
                m.add_vertex(id, level, (*label).to_owned()).map_err(gerr)?;
                last_vertex = Some(id);
            }
            ["e", u, v] if section <= Section::Edges => {
                if section == Section::Vertices {
                    section = Section::Edges;
                }
                let u = VertexId(parse_num(u, line, "vertex id")?);
                let v = VertexId(parse_num(v, line, "vertex id")?);
                if u >= v || last_edge.is_some_and(|p| p >= (u, v)) {
                    return Err(err(line, "edges must be sorted with the smaller id first"));
                }
                m.add_edge(u, v).map_err(gerr)?;
                last_edge = Some((u, v));
            }
            ["s", x, j, members @ ..] => {
                if section != Section::Snapshots {
                    section = Section::Snapshots;
                    expected_snapshots = m
                        .vertices()
                        .flat_map(|x| {
                            let l = m.level_of(x).expect("own vertex");
                            (0..l).map(move |j| (x, j))
                        })
                        .collect();
                }
                let x = VertexId(parse_num(x, line, "vertex id")?);
                let j: usize = parse_num(j, line, "level")?;
                if expected_snapshots.get(next_snapshot) != Some(&(x, j)) {
                    return Err(err(line, format!("unexpected snapshot entry for {x} at level {j}")));
                }
                next_snapshot += 1;
                let mut set = VertexSet::new();
                let mut last = None;
                for tok in members {
                    let y = VertexId(parse_num(tok, line, "vertex id")?);
                    if last.is_some_and(|p| p >= y) {
                        return Err(err(line, "snapshot members must be strictly increasing"));
                    }
                    set.insert(y);
                    last = Some(y);
                }
                m.set_snapshot(x, j, set).map_err(gerr)?;
            }
            _ => return Err(err(line, format!("unexpected line {raw:?}"))),
        }
    }
    if section != Section::Snapshots {
        expected_snapshots = m
            .vertices()
            .flat_map(|x| {
                let l = m.level_of(x).expect("own vertex");
                (0..l).map(move |j| (x, j))
            })
            .collect();
    }
    if next_snapshot != expected_snapshots.len() {
        let (x, j) = expected_snapshots[next_snapshot];
        return Err(err(
            text.lines().count() + 1,
            format!("missing snapshot entry for {x} at level {j}"),
        ));
    }
    m.validate().map_err(|e| err(0, e.to_string()))?;
    Ok(m)
}

//! Parsers for graph and building-set files.
//!
//! Graph text: first meaningful line is the vertex count, then one `u v`
//! edge per line. Graph JSON: `{"vertex_count": n, "edges": [[u, v], ...]}`.
//! Building-set text: first line the ground size, then one member per line
//! as space-separated labels. `#` starts a comment everywhere.

use assocwidth::{BuildingSet, Graph, VertexSet};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphDoc {
    pub fn of(g: &Graph) -> Self {
        GraphDoc {
            vertex_count: g.vertex_count(),
            edges: g.edges(),
        }
    }

    pub fn to_graph(&self) -> Result<Graph, CliError> {
        Ok(Graph::new(self.vertex_count, self.edges.iter().copied())?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BuildingSetDoc {
    pub ground_size: usize,
    pub members: Vec<VertexSet>,
}

impl BuildingSetDoc {
    pub fn of(b: &BuildingSet) -> Self {
        BuildingSetDoc {
            ground_size: b.ground_size(),
            members: b.members().to_vec(),
        }
    }
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens of a line with their 1-based columns,
/// stopping at `#`.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let code = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in code.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &code[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &code[s..]));
    }
    out
}

fn number(line: usize, column: usize, tok: &str, what: &str) -> Result<usize, CliError> {
    tok.parse::<usize>()
        .map_err(|_| parse_error(line, column, format!("expected {what}, found `{tok}`")))
}

/// Non-empty lines as `(line number, tokens)`.
fn meaningful_lines(text: &str) -> impl Iterator<Item = (usize, Vec<(usize, &str)>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, tokens(l)))
        .filter(|(_, t)| !t.is_empty())
}

pub fn parse_graph_text(text: &str) -> Result<Graph, CliError> {
    let owned: Vec<(usize, Vec<(usize, String)>)> = meaningful_lines(text)
        .map(|(l, t)| (l, t.into_iter().map(|(c, s)| (c, s.to_string())).collect()))
        .collect();
    let mut it = owned.iter();
    let Some((ln, head)) = it.next() else {
        return Err(parse_error(1, 1, "empty input, expected the vertex count"));
    };
    if head.len() != 1 {
        return Err(parse_error(*ln, head[1].0, "expected only the vertex count on the first line"));
    }
    let n = number(*ln, head[0].0, &head[0].1, "the vertex count")?;
    let mut edges = Vec::new();
    for (ln, toks) in it {
        if toks.len() != 2 {
            let col = toks.get(2).map_or(toks[0].0, |t| t.0);
            return Err(parse_error(*ln, col, format!("expected `u v`, found {} tokens", toks.len())));
        }
        let u = number(*ln, toks[0].0, &toks[0].1, "a vertex label")?;
        let v = number(*ln, toks[1].0, &toks[1].1, "a vertex label")?;
        for (&x, col) in [(&u, toks[0].0), (&v, toks[1].0)] {
            if x == 0 || x > n {
                return Err(parse_error(*ln, col, format!("vertex {x} is outside 1..={n}")));
            }
        }
        if u == v {
            return Err(parse_error(*ln, toks[0].0, format!("self-loop at vertex {u}")));
        }
        edges.push((u, v));
    }
    let mut seen = std::collections::BTreeSet::new();
    for (i, &(u, v)) in edges.iter().enumerate() {
        if !seen.insert((u.min(v), u.max(v))) {
            let (ln, toks) = &owned[i + 1];
            return Err(parse_error(*ln, toks[0].0, format!("duplicate edge {u}-{v}")));
        }
    }
    Ok(Graph::new(n, edges)?)
}

pub fn parse_graph_json(text: &str) -> Result<Graph, CliError> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| parse_error(e.line(), e.column(), e.to_string()))?;
    doc.to_graph()
}

/// Picks the JSON form when the first non-blank character is `{`.
pub fn parse_graph(text: &str) -> Result<Graph, CliError> {
    if text.trim_start().starts_with('{') {
        parse_graph_json(text)
    } else {
        parse_graph_text(text)
    }
}

pub fn parse_building_set(text: &str) -> Result<BuildingSet, CliError> {
    let owned: Vec<(usize, Vec<(usize, String)>)> = meaningful_lines(text)
        .map(|(l, t)| (l, t.into_iter().map(|(c, s)| (c, s.to_string())).collect()))
        .collect();
    let mut it = owned.iter();
    let Some((ln, head)) = it.next() else {
        return Err(parse_error(1, 1, "empty input, expected the ground size"));
    };
    if head.len() != 1 {
        return Err(parse_error(*ln, head[1].0, "expected only the ground size on the first line"));
    }
    let ground = number(*ln, head[0].0, &head[0].1, "the ground size")?;
    if ground == 0 || ground > 64 {
        return Err(parse_error(*ln, head[0].0, format!("ground size {ground} is outside 1..=64")));
    }
    let mut members = Vec::new();
    for (ln, toks) in it {
        let mut labels = Vec::new();
        for (col, tok) in toks {
            let l = number(*ln, *col, tok, "a vertex label")?;
            if l == 0 || l > ground {
                return Err(parse_error(*ln, *col, format!("label {l} is outside 1..={ground}")));
            }
            labels.push(l);
        }
        members.push(VertexSet::from_labels(ground, labels)?);
    }
    Ok(BuildingSet::new(ground, members)?)
}

/// Splits batch input into blocks separated by lines holding only `---`.
/// Returns each block with the line number it starts on.
pub fn split_batch(text: &str) -> Vec<(usize, String)> {
    let mut blocks = Vec::new();
    let mut current = String::new();
    let mut start = 1;
    for (i, line) in text.lines().enumerate() {
        if line.trim() == "---" {
            blocks.push((start, std::mem::take(&mut current)));
            start = i + 2;
        } else {
            current.push_str(line);
            current.push('\n');
        }
    }
    blocks.push((start, current));
    blocks.retain(|(_, b)| b.lines().any(|l| !tokens(l).is_empty()));
    blocks
}

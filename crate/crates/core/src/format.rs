//! Text formats for tensors and graphs.
//!
//! Tensor text format (whitespace-insensitive, `#` starts a comment):
//!
//! ```text
//! n 3
//! a 2
//! slice
//!   1 0 0
//!   0 1 0
//!   0 0 1
//! slice
//!   0 1 0
//!   1 0 0
//!   0 0 0
//! ```
//!
//! The header keywords `n` and `a` come first, in either order, followed by
//! `a * n * n` integers in row-major order, slice by slice. The `slice`
//! keyword is optional but, when present, must start a matrix. A JSON form
//! `{"n": 3, "a": 2, "slices": [[[1,0,0],[0,1,0],[0,0,1]], ...]}` is also
//! accepted; it is recognised by a leading `{`.
//!
//! Graph format: first line `V E`, then `E` lines `u v` with 0-indexed
//! vertices.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructors::{Graph, GraphError};
use crate::tensor::{Tensor, TensorError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid JSON tensor: {0}")]
    Json(String),
    #[error("expected {expected} matrix entries, found {found}")]
    EntryCount { expected: usize, found: usize },
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

/// Tokens with their 1-based line numbers, comments removed.
fn tokens(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .flat_map(|(i, l)| l.split('#').next().unwrap_or("").split_whitespace().map(move |t| (i + 1, t)))
        .collect()
}

fn parse_int<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T, ParseError> {
    tok.parse().map_err(|_| syntax(line, format!("expected {what}, found `{tok}`")))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonTensor {
    n: usize,
    #[serde(default)]
    a: Option<usize>,
    slices: Vec<Vec<Vec<i64>>>,
}

pub fn parse_tensor(text: &str) -> Result<Tensor, ParseError> {
    if text.trim_start().starts_with('{') {
        return parse_tensor_json(text);
    }
    let toks = tokens(text);
    let mut it = toks.iter().peekable();
    let (mut n, mut a) = (None, None);
    while n.is_none() || a.is_none() {
        let Some(&(line, key)) = it.next() else {
            return Err(syntax(toks.last().map_or(1, |t| t.0), "missing header: need `n <size>` and `a <slices>`"));
        };
        let Some(&(vline, value)) = it.next() else {
            return Err(syntax(line, format!("missing value after `{key}`")));
        };
        let slot = match key {
            "n" => &mut n,
            "a" => &mut a,
            other => return Err(syntax(line, format!("expected header keyword `n` or `a`, found `{other}`"))),
        };
        if slot.is_some() {
            return Err(syntax(line, format!("duplicate header keyword `{key}`")));
        }
        *slot = Some(parse_int::<usize>(vline, value, "a non-negative integer")?);
    }
    let (n, a) = (n.expect("set"), a.expect("set"));
    if n == 0 {
        return Err(TensorError::TooSmall(0).into());
    }
    if a == 0 {
        return Err(TensorError::NoSlices.into());
    }
    let per = n * n;
    let mut values = Vec::with_capacity(a * per);
    for &(line, tok) in it {
        if tok.eq_ignore_ascii_case("slice") {
            if values.len() % per != 0 {
                return Err(syntax(line, "`slice` inside a matrix"));
            }
            continue;
        }
        values.push(parse_int::<i64>(line, tok, "an integer entry")?);
    }
    if values.len() != a * per {
        return Err(ParseError::EntryCount { expected: a * per, found: values.len() });
    }
    Ok(Tensor::new(n, values.chunks(per).map(<[i64]>::to_vec).collect())?)
}

fn parse_tensor_json(text: &str) -> Result<Tensor, ParseError> {
    let j: JsonTensor = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    if let Some(a) = j.a {
        if a != j.slices.len() {
            return Err(ParseError::Json(format!("`a` is {a} but {} slices are given", j.slices.len())));
        }
    }
    let t = Tensor::from_matrices(&j.slices)?;
    if t.n() != j.n {
        return Err(ParseError::Json(format!("`n` is {} but the slices are {}x{}", j.n, t.n(), t.n())));
    }
    Ok(t)
}

/// Renders a tensor in the text format; `parse_tensor` reads it back.
pub fn write_tensor(tensor: &Tensor) -> String {
    let n = tensor.n();
    let mut out = format!("n {n}\na {}\n", tensor.a());
    for s in tensor.slices() {
        out.push_str("slice\n");
        for row in s.chunks(n) {
            let cells: Vec<String> = row.iter().map(i64::to_string).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
    }
    out
}

pub fn write_tensor_json(tensor: &Tensor) -> String {
    let n = tensor.n();
    let slices = tensor.slices().iter().map(|s| s.chunks(n).map(<[i64]>::to_vec).collect()).collect();
    serde_json::to_string(&JsonTensor { n, a: Some(tensor.a()), slices }).expect("plain data serializes")
}

pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let lines: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty())
        .collect();
    let Some((hline, header)) = lines.first() else {
        return Err(syntax(1, "empty graph file"));
    };
    let [v, e] = header.as_slice() else {
        return Err(syntax(*hline, "header must be `<vertices> <edges>`"));
    };
    let vertices: usize = parse_int(*hline, v, "a vertex count")?;
    let edge_count: usize = parse_int(*hline, e, "an edge count")?;
    let mut edges = Vec::with_capacity(edge_count);
    for (line, toks) in &lines[1..] {
        let [u, w] = toks.as_slice() else {
            return Err(syntax(*line, "edge lines must be `<u> <v>`"));
        };
        edges.push((parse_int(*line, u, "a vertex")?, parse_int(*line, w, "a vertex")?));
    }
    if edges.len() != edge_count {
        return Err(syntax(lines.last().map_or(1, |l| l.0), format!("header announces {edge_count} edges, found {}", edges.len())));
    }
    Ok(Graph::new(vertices, edges)?)
}

//! Combinatorial reference values: reduced chromatic polynomials of graphs by
//! deletion-contraction, and reduced characteristic polynomials of
//! represented matroids by the Whitney rank sum.

use std::collections::HashMap;

use thiserror::Error;

use crate::constructors::{Graph, GraphError};
use crate::linalg::exact_rank;

pub const MAX_MATROID_COLUMNS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("matroid has a loop (column {0} is zero): the characteristic polynomial vanishes")]
    MatroidLoop(usize),
    #[error("matroid has {0} columns, at most {MAX_MATROID_COLUMNS} are supported")]
    TooManyColumns(usize),
    #[error("matroid matrix is empty or ragged")]
    BadMatrix,
    #[error("polynomial is not divisible by {0}")]
    NotDivisible(&'static str),
}

/// Integer polynomial in `k`, coefficients by ascending degree.
pub type IntPoly = Vec<i64>;

fn trim(mut p: IntPoly) -> IntPoly {
    while p.len() > 1 && p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn sub(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, v) in a.iter().enumerate() {
        out[i] += v;
    }
    for (i, v) in b.iter().enumerate() {
        out[i] -= v;
    }
    trim(out)
}

/// Exact division by `k - root`; `None` if there is a remainder.
fn divide_linear(p: &IntPoly, root: i64) -> Option<IntPoly> {
    if p.len() < 2 {
        return if p.iter().all(|&c| c == 0) { Some(vec![0]) } else { None };
    }
    let deg = p.len() - 1;
    let mut q = vec![0; deg];
    let mut carry = 0;
    for i in (0..deg).rev() {
        carry = p[i + 1] + carry * root;
        q[i] = carry;
    }
    (p[0] + carry * root == 0).then(|| trim(q))
}

/// Chromatic polynomial of a multigraph by deletion-contraction. Parallel
/// edges are merged first; subgraphs are memoized on their relabelled
/// edge sets.
pub fn chromatic_polynomial(graph: &Graph) -> IntPoly {
    if graph.first_loop().is_some() {
        return vec![0];
    }
    let mut memo = HashMap::new();
    dc(graph.vertex_count(), simple_edges(graph.edges()), &mut memo)
}

fn simple_edges(edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut e: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    e.sort_unstable();
    e.dedup();
    e
}

type Memo = HashMap<(usize, Vec<(usize, usize)>), IntPoly>;

fn dc(vertices: usize, edges: Vec<(usize, usize)>, memo: &mut Memo) -> IntPoly {
    if edges.is_empty() {
        let mut p = vec![0; vertices + 1];
        p[vertices] = 1;
        return p;
    }
    let key = (vertices, edges);
    if let Some(p) = memo.get(&key) {
        return p.clone();
    }
    let (vertices, edges) = key;
    let (u, v) = *edges.last().expect("nonempty");
    let deleted = edges[..edges.len() - 1].to_vec();
    // contract v into u, then move the last vertex into v's slot
    let last = vertices - 1;
    let relabel = |x: usize| {
        let x = if x == v { u } else { x };
        if x == last { v } else { x }
    };
    let contracted: Vec<(usize, usize)> = deleted
        .iter()
        .map(|&(a, b)| (relabel(a), relabel(b)))
        .filter(|(a, b)| a != b)
        .collect();
    let with_deletion = dc(vertices, deleted, memo);
    let with_contraction = dc(vertices - 1, simple_edges(&contracted), memo);
    let p = sub(&with_deletion, &with_contraction);
    memo.insert((vertices, edges), p.clone());
    p
}

/// `chi_G(k) / (k (k - 1))` with signs, ascending degree.
pub fn reduced_chromatic_polynomial(graph: &Graph) -> Result<IntPoly, OracleError> {
    graph.check_connected_loopless()?;
    let chi = chromatic_polynomial(graph);
    let over_k = divide_linear(&chi, 0).ok_or(OracleError::NotDivisible("k"))?;
    divide_linear(&over_k, 1).ok_or(OracleError::NotDivisible("k - 1"))
}

/// Absolute coefficients of the reduced chromatic polynomial from degree
/// `|V| - 2` down to `0`.
pub fn graph_chromatic_oracle(graph: &Graph) -> Result<Vec<u64>, OracleError> {
    let reduced = reduced_chromatic_polynomial(graph)?;
    Ok(reduced.iter().rev().map(|c| c.unsigned_abs()).collect())
}

/// `sum_S (-1)^|S| k^(r(E) - r(S))` over subsets of the columns of `matrix`
/// (given by rows), ascending degree.
pub fn matroid_characteristic_polynomial(matrix: &[Vec<i64>]) -> Result<IntPoly, OracleError> {
    let cols = matrix.first().map_or(0, Vec::len);
    if cols == 0 || matrix.iter().any(|r| r.len() != cols) {
        return Err(OracleError::BadMatrix);
    }
    if cols > MAX_MATROID_COLUMNS {
        return Err(OracleError::TooManyColumns(cols));
    }
    let columns: Vec<Vec<i64>> = (0..cols).map(|j| matrix.iter().map(|r| r[j]).collect()).collect();
    if let Some(j) = columns.iter().position(|c| c.iter().all(|&v| v == 0)) {
        return Err(OracleError::MatroidLoop(j));
    }
    let full = exact_rank(&columns);
    let mut poly = vec![0i64; full + 1];
    for mask in 0u32..(1 << cols) {
        let chosen: Vec<Vec<i64>> = (0..cols).filter(|j| mask & (1 << j) != 0).map(|j| columns[j].clone()).collect();
        let r = exact_rank(&chosen);
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        poly[full - r] += sign;
    }
    Ok(trim(poly))
}

/// Absolute coefficients of `chi_M(k) / (k - 1)` from the top degree down.
pub fn matroid_characteristic_oracle(matrix: &[Vec<i64>]) -> Result<Vec<u64>, OracleError> {
    let chi = matroid_characteristic_polynomial(matrix)?;
    let reduced = divide_linear(&chi, 1).ok_or(OracleError::NotDivisible("k - 1"))?;
    Ok(reduced.iter().rev().map(|c| c.unsigned_abs()).collect())
}

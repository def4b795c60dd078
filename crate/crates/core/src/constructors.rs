//! Tensors from graphs, explicit matrix spaces, named models and random
//! low-rank samples.

use rand::Rng;
use thiserror::Error;

use crate::rng::{stream_rng, Purpose, StreamKey};
use crate::tensor::{Tensor, TensorError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no edges")]
    NoEdges,
    #[error("graph has no vertices")]
    NoVertices,
    #[error("edge {index} endpoint {vertex} is out of range for {vertex_count} vertices")]
    VertexOutOfRange { index: usize, vertex: usize, vertex_count: usize },
    #[error("loop at vertex {0}: the chromatic polynomial vanishes")]
    Loop(usize),
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Undirected multigraph on vertices `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::NoVertices);
        }
        for (index, &(u, v)) in edges.iter().enumerate() {
            for vertex in [u, v] {
                if vertex >= vertex_count {
                    return Err(GraphError::VertexOutOfRange { index, vertex, vertex_count });
                }
            }
        }
        Ok(Graph { vertex_count, edges })
    }

    pub fn cycle(len: usize) -> Self {
        let edges = (0..len).map(|i| (i, (i + 1) % len)).collect();
        Graph { vertex_count: len, edges }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
        Graph { vertex_count: n, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn first_loop(&self) -> Option<usize> {
        self.edges.iter().find(|(u, v)| u == v).map(|&(u, _)| u)
    }

    pub fn component_count(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut components = self.vertex_count;
        for &(u, v) in &self.edges {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru] = rv;
                components -= 1;
            }
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Rejects loops, disconnected graphs and edgeless graphs.
    pub fn check_connected_loopless(&self) -> Result<(), GraphError> {
        if let Some(v) = self.first_loop() {
            return Err(GraphError::Loop(v));
        }
        if self.edges.is_empty() {
            return Err(GraphError::NoEdges);
        }
        match self.component_count() {
            1 => Ok(()),
            components => Err(GraphError::Disconnected { components }),
        }
    }

    /// Vertex-by-edge matrix; edge `(u, v)` is oriented `u -> v` and gets
    /// `-1` in row `u`, `+1` in row `v`.
    pub fn signed_incidence(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0; self.edges.len()]; self.vertex_count];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            m[u][e] -= 1;
            m[v][e] += 1;
        }
        m
    }

    /// Random connected loopless simple graph: a random spanning tree plus
    /// extra distinct edges, `edge_count` edges in total (capped at the
    /// number of vertex pairs).
    pub fn random_connected<R: Rng + ?Sized>(vertex_count: usize, edge_count: usize, rng: &mut R) -> Self {
        let mut edges: Vec<(usize, usize)> = (1..vertex_count).map(|v| (rng.gen_range(0..v), v)).collect();
        let max = vertex_count * (vertex_count - 1) / 2;
        let target = edge_count.clamp(edges.len(), max);
        while edges.len() < target {
            let u = rng.gen_range(0..vertex_count);
            let v = rng.gen_range(0..vertex_count);
            let e = (u.min(v), u.max(v));
            if u != v && !edges.contains(&e) {
                edges.push(e);
            }
        }
        Graph { vertex_count, edges }
    }
}

/// The space of diagonal `|E| x |E|` matrices `diag(x_v - x_u)` over edges
/// `(u, v)`, spanned by the potentials of all vertices except the last.
pub fn graph_to_tensor(graph: &Graph) -> Result<Tensor, GraphError> {
    graph.check_connected_loopless()?;
    let n = graph.edges.len();
    let slices = (0..graph.vertex_count - 1)
        .map(|w| {
            let mut s = vec![0i64; n * n];
            for (e, &(u, v)) in graph.edges.iter().enumerate() {
                let coeff = i64::from(v == w) - i64::from(u == w);
                s[e * n + e] = coeff;
            }
            s
        })
        .collect();
    Ok(Tensor::new(n, slices)?)
}

/// A tensor whose slices are given explicitly as square integer matrices.
pub fn model_from_matrix_space(slices: &[Vec<Vec<i64>>]) -> Result<Tensor, TensorError> {
    Tensor::from_matrices(slices)
}

/// `sum_{k<r} u_k (x) v_k (x) w_k` with integer factors in `[-99, 99]`,
/// drawn from `seed` and the shape `(a, n, r)`. The sample is redrawn until
/// its contraction space has the generic dimension `min(a, r, n^2)`.
pub fn generic_rank_r_tensor(a: usize, n: usize, r: usize, seed: u64) -> Result<Tensor, TensorError> {
    let generic_dim = a.min(r).min(n * n);
    if generic_dim == 0 {
        return Err(if n == 0 { TensorError::TooSmall(0) } else { TensorError::EmptyContraction });
    }
    let shape = ((a as u32 & 0xff) << 16) | ((n as u32 & 0xff) << 8) | (r as u32 & 0xff);
    for attempt in 0u32.. {
        let mut rng = stream_rng(seed, StreamKey::new(Purpose::TensorSample, shape, attempt));
        let mut draw = |len: usize| -> Vec<i64> { (0..len).map(|_| rng.gen_range(-99..=99)).collect() };
        let factors: Vec<(Vec<i64>, Vec<i64>, Vec<i64>)> = (0..r).map(|_| (draw(a), draw(n), draw(n))).collect();
        let slices: Vec<Vec<i64>> = (0..a)
            .map(|i| {
                let mut s = vec![0i64; n * n];
                for (u, v, w) in &factors {
                    for row in 0..n {
                        for col in 0..n {
                            s[row * n + col] += u[i] * v[row] * w[col];
                        }
                    }
                }
                s
            })
            .collect();
        let tensor = match Tensor::new(n, slices) {
            Ok(t) => t,
            Err(TensorError::EmptyContraction) => continue,
            Err(e) => return Err(e),
        };
        if tensor.contraction_dim() == generic_dim {
            return Ok(tensor);
        }
        log::debug!("rank-{r} sample {attempt} is degenerate, redrawing");
    }
    unreachable!("attempt counter exhausted")
}

fn unit(n: usize, entries: &[(usize, usize)]) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0; n]; n];
    for &(r, c) in entries {
        m[r][c] += 1;
    }
    m
}

/// Symmetric 4x4 matrices with free diagonal and free cyclic neighbours
/// `(1,2), (2,3), (3,4), (4,1)`; the remaining two entries vanish.
pub fn cyclic_quadric_family() -> Tensor {
    let slices = [
        unit(4, &[(0, 0)]),
        unit(4, &[(1, 1)]),
        unit(4, &[(2, 2)]),
        unit(4, &[(3, 3)]),
        unit(4, &[(0, 1), (1, 0)]),
        unit(4, &[(1, 2), (2, 1)]),
        unit(4, &[(2, 3), (3, 2)]),
        unit(4, &[(3, 0), (0, 3)]),
    ];
    model_from_matrix_space(&slices).expect("fixed model")
}

/// Five symmetric 3x3 slices, one per upper-triangular position outside the
/// corner, each also carrying a `1` in the bottom-right corner.
pub fn concentration_model() -> Tensor {
    let corner = (2, 2);
    let slices = [
        unit(3, &[(0, 0), corner]),
        unit(3, &[(0, 1), (1, 0), corner]),
        unit(3, &[(1, 1), corner]),
        unit(3, &[(0, 2), (2, 0), corner]),
        unit(3, &[(1, 2), (2, 1), corner]),
    ];
    model_from_matrix_space(&slices).expect("fixed model")
}

/// Block matrices `[[a, b, 0], [b, c, 0], [0, 0, d]]`.
pub fn block_space() -> Tensor {
    let slices = [unit(3, &[(0, 0)]), unit(3, &[(0, 1), (1, 0)]), unit(3, &[(1, 1)]), unit(3, &[(2, 2)])];
    model_from_matrix_space(&slices).expect("fixed model")
}

/// The single slice `I_n`.
pub fn identity_space(n: usize) -> Tensor {
    let slices = [unit(n, &(0..n).map(|i| (i, i)).collect::<Vec<_>>())];
    model_from_matrix_space(&slices).expect("fixed model")
}

/// All diagonal `n x n` matrices.
pub fn diagonal_space(n: usize) -> Tensor {
    let slices: Vec<Vec<Vec<i64>>> = (0..n).map(|i| unit(n, &[(i, i)])).collect();
    model_from_matrix_space(&slices).expect("fixed model")
}

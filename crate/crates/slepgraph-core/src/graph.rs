//! Graph representation, Laplacians, symmetric eigendecomposition, the graph
//! Fourier transform, and spectral convolution.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};

/// Undirected weighted graph with a dense symmetric adjacency matrix.
#[derive(Debug, Clone)]
pub struct Graph {
    n_nodes: usize,
    adjacency: Mat,
    node_ids: Option<Vec<String>>,
}

/// Which Laplacian to build from an adjacency matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LaplacianKind {
    Combinatorial,
    Normalized,
}

/// Eigendecomposition of a graph Laplacian: ascending eigenvalues and the
/// orthonormal eigenvector matrix defining the graph Fourier transform.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Mat,
    pub laplacian_kind: LaplacianKind,
}

/// Multi-channel signal over graph nodes (one row per node).
#[derive(Debug, Clone)]
pub struct GraphSignal {
    pub values: Mat,
}

/// Serialized graph file: 0-based edge list with weights.
#[derive(Serialize, Deserialize)]
struct GraphFile {
    n_nodes: usize,
    edges: Vec<(usize, usize, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    node_ids: Option<Vec<String>>,
}

impl Graph {
    /// Build a graph from an edge list, densifying into a symmetric
    /// adjacency matrix. Duplicate edges (in either orientation), self-loops
    /// and negative weights are rejected.
    pub fn from_edges(n_nodes: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        if n_nodes == 0 {
            return Err(Error::InvalidConfig("graph needs at least one node".into()));
        }
        let mut adjacency = Mat::zeros(n_nodes, n_nodes);
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        for &(i, j, w) in edges {
            if i >= n_nodes {
                return Err(Error::NodeOutOfRange { index: i, n_nodes });
            }
            if j >= n_nodes {
                return Err(Error::NodeOutOfRange { index: j, n_nodes });
            }
            if i == j {
                return Err(Error::SelfLoop { node: i });
            }
            if w < 0.0 {
                return Err(Error::NegativeWeight { i, j, weight: w });
            }
            let key = (i.min(j), i.max(j));
            if !seen.insert(key) {
                return Err(Error::DuplicateEdge { i, j });
            }
            adjacency[(i, j)] = w;
            adjacency[(j, i)] = w;
        }
        Ok(Graph {
            n_nodes,
            adjacency,
            node_ids: None,
        })
    }

    /// Unit-weight convenience constructor.
    pub fn from_unweighted_edges(n_nodes: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let weighted: Vec<(usize, usize, f64)> = edges.iter().map(|&(i, j)| (i, j, 1.0)).collect();
        Graph::from_edges(n_nodes, &weighted)
    }

    pub fn with_node_ids(mut self, ids: Vec<String>) -> Result<Self> {
        if ids.len() != self.n_nodes {
            return Err(Error::DimensionMismatch {
                context: "node_ids",
                expected: self.n_nodes,
                got: ids.len(),
            });
        }
        self.node_ids = Some(ids);
        Ok(self)
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn adjacency(&self) -> &Mat {
        &self.adjacency
    }

    pub fn node_ids(&self) -> Option<&[String]> {
        self.node_ids.as_deref()
    }

    pub fn degree(&self, i: usize) -> f64 {
        self.adjacency.row(i).iter().sum()
    }

    pub fn degrees(&self) -> Vec<f64> {
        (0..self.n_nodes).map(|i| self.degree(i)).collect()
    }

    /// Edge list (i < j, weight > 0) recovered from the adjacency matrix.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.n_nodes {
            for j in (i + 1)..self.n_nodes {
                let w = self.adjacency[(i, j)];
                if w > 0.0 {
                    out.push((i, j, w));
                }
            }
        }
        out
    }

    /// Connected component label per node (breadth-first over positive weights).
    pub fn component_labels(&self) -> Vec<usize> {
        let n = self.n_nodes;
        let mut labels = vec![usize::MAX; n];
        let mut next = 0;
        let mut queue = std::collections::VecDeque::new();
        for start in 0..n {
            if labels[start] != usize::MAX {
                continue;
            }
            labels[start] = next;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for v in 0..n {
                    if self.adjacency[(u, v)] > 0.0 && labels[v] == usize::MAX {
                        labels[v] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        labels
    }

    pub fn is_connected(&self) -> bool {
        self.component_labels().iter().all(|&l| l == 0)
    }

    pub fn save_json(&self, path: &Path) -> Result<()> {
        let file = GraphFile {
            n_nodes: self.n_nodes,
            edges: self.edges(),
            node_ids: self.node_ids.clone(),
        };
        let json = serde_json::to_string_pretty(&file)?;
        std::fs::write(path, json)?;
        Ok(())
    }

    pub fn load_json(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let file: GraphFile = serde_json::from_str(&text)?;
        let mut g = Graph::from_edges(file.n_nodes, &file.edges)?;
        if let Some(ids) = file.node_ids {
            g = g.with_node_ids(ids)?;
        }
        Ok(g)
    }
}

impl GraphSignal {
    pub fn new(graph: &Graph, values: Mat) -> Result<Self> {
        if values.rows() != graph.n_nodes() {
            return Err(Error::DimensionMismatch {
                context: "graph signal rows",
                expected: graph.n_nodes(),
                got: values.rows(),
            });
        }
        Ok(GraphSignal { values })
    }

    pub fn channels(&self) -> usize {
        self.values.cols()
    }
}

/// Build the combinatorial (L = D - A) or symmetric-normalized
/// (L_n = D^{-1/2} L D^{-1/2}) Laplacian.
pub fn build_laplacian(graph: &Graph, kind: LaplacianKind) -> Result<Mat> {
    let n = graph.n_nodes();
    let degrees = graph.degrees();
    match kind {
        LaplacianKind::Combinatorial => {
            let mut l = graph.adjacency().clone();
            l.scale(-1.0);
            for i in 0..n {
                l[(i, i)] = degrees[i];
            }
            Ok(l)
        }
        LaplacianKind::Normalized => {
            if let Some(node) = degrees.iter().position(|&d| d <= 0.0) {
                return Err(Error::DegenerateDegree { node });
            }
            let inv_sqrt: Vec<f64> = degrees.iter().map(|&d| 1.0 / d.sqrt()).collect();
            let mut l = Mat::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        l[(i, j)] = 1.0;
                    } else {
                        l[(i, j)] = -graph.adjacency()[(i, j)] * inv_sqrt[i] * inv_sqrt[j];
                    }
                }
            }
            Ok(l)
        }
    }
}

/// Eigendecomposition of a symmetric matrix into an [`EigenSystem`].
///
/// Eigenvalues are ascending (stable index tie-break); each eigenvector's
/// first significant entry is made positive so repeated runs agree exactly.
pub fn eig_sym(matrix: &Mat, kind: LaplacianKind) -> Result<EigenSystem> {
    let dev = matrix.symmetry_deviation();
    if dev > 1e-10 {
        return Err(Error::NotSymmetric { max_dev: dev });
    }
    let (eigenvalues, eigenvectors) = linalg::sym_eig(matrix)?;
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
        laplacian_kind: kind,
    })
}

/// Laplacian eigendecomposition of a graph in one step.
pub fn graph_eigensystem(graph: &Graph, kind: LaplacianKind) -> Result<EigenSystem> {
    let l = build_laplacian(graph, kind)?;
    eig_sym(&l, kind)
}

impl EigenSystem {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// First k eigenvector columns (the low-frequency band).
    pub fn band(&self, k: usize) -> Mat {
        self.eigenvectors.left_columns(k)
    }
}

/// Graph Fourier transform: coefficients of `x` in the Laplacian eigenbasis.
pub fn gft(eig: &EigenSystem, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != eig.n() {
        return Err(Error::DimensionMismatch {
            context: "gft signal length",
            expected: eig.n(),
            got: x.len(),
        });
    }
    Ok(eig.eigenvectors.tr_matvec(x))
}

/// Inverse graph Fourier transform.
pub fn igft(eig: &EigenSystem, coeffs: &[f64]) -> Result<Vec<f64>> {
    if coeffs.len() != eig.n() {
        return Err(Error::DimensionMismatch {
            context: "igft coefficient length",
            expected: eig.n(),
            got: coeffs.len(),
        });
    }
    Ok(eig.eigenvectors.matvec(coeffs))
}

/// Spectral convolution: U diag(g_hat) U^T x.
pub fn graph_convolve(eig: &EigenSystem, x: &[f64], g_hat: &[f64]) -> Result<Vec<f64>> {
    if g_hat.len() != eig.n() {
        return Err(Error::DimensionMismatch {
            context: "spectral response length",
            expected: eig.n(),
            got: g_hat.len(),
        });
    }
    let mut coeffs = gft(eig, x)?;
    for (c, &g) in coeffs.iter_mut().zip(g_hat) {
        *c *= g;
    }
    igft(eig, &coeffs)
}

/// Path graph on n nodes: 0-1-2-...-(n-1), unit weights.
pub fn path_graph(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    Graph::from_unweighted_edges(n, &edges).expect("path graph is valid")
}

/// Cycle graph on n nodes, unit weights.
pub fn cycle_graph(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 nodes");
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_unweighted_edges(n, &edges).expect("cycle graph is valid")
}

/// Complete graph on n nodes, unit weights.
pub fn complete_graph(n: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((i, j));
        }
    }
    Graph::from_unweighted_edges(n, &edges).expect("complete graph is valid")
}


#[cfg(test)]
mod prop_tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_graph_and_signal() -> impl Strategy<Value = (Graph, Vec<f64>)> {
        (3usize..12)
            .prop_flat_map(|n| {
                let edges = proptest::collection::vec(
                    (0..n, 0..n, 0.1f64..2.0),
                    1..(n * (n - 1) / 2).max(2),
                );
                let signal = proptest::collection::vec(-5.0f64..5.0, n..=n);
                (Just(n), edges, signal)
            })
            .prop_map(|(n, raw_edges, signal)| {
                let mut seen = std::collections::HashSet::new();
                let mut edges = Vec::new();
                for (i, j, w) in raw_edges {
                    if i != j && seen.insert((i.min(j), i.max(j))) {
                        edges.push((i, j, w));
                    }
                }
                (Graph::from_edges(n, &edges).unwrap(), signal)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn gft_round_trip_and_isometry((g, x) in arb_graph_and_signal()) {
            let eig = graph_eigensystem(&g, LaplacianKind::Combinatorial).unwrap();
            let coeffs = gft(&eig, &x).unwrap();
            let back = igft(&eig, &coeffs).unwrap();
            for (a, b) in x.iter().zip(&back) {
                prop_assert!((a - b).abs() < 1e-10);
            }
            let nx = crate::linalg::norm2(&x);
            let nc = crate::linalg::norm2(&coeffs);
            prop_assert!((nx - nc).abs() < 1e-10 * nx.max(1.0));
        }
    }
}

//! Spectral clustering of graph nodes and the attention-based cluster mask
//! that produces the soft node selector feeding Slepian computation.

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{self, Graph, LaplacianKind};
use crate::linalg::Mat;
use crate::rng;
use crate::slepian::NodeSelector;

/// One-hot cluster assignment: M is kappa x N with exactly one 1 per column.
#[derive(Debug, Clone)]
pub struct ClusterAssignment {
    pub kappa: usize,
    pub labels: Vec<usize>,
}

impl ClusterAssignment {
    pub fn from_labels(kappa: usize, labels: Vec<usize>) -> Result<Self> {
        let mut counts = vec![0usize; kappa];
        for &l in &labels {
            if l >= kappa {
                return Err(Error::InvalidConfig(format!(
                    "cluster label {l} out of range for kappa={kappa}"
                )));
            }
            counts[l] += 1;
        }
        if counts.iter().any(|&c| c == 0) {
            return Err(Error::InvalidConfig("empty cluster in assignment".into()));
        }
        Ok(ClusterAssignment { kappa, labels })
    }

    pub fn n_nodes(&self) -> usize {
        self.labels.len()
    }

    /// Dense one-hot assignment matrix M (kappa x N).
    pub fn matrix(&self) -> Mat {
        let mut m = Mat::zeros(self.kappa, self.labels.len());
        for (i, &l) in self.labels.iter().enumerate() {
            m[(l, i)] = 1.0;
        }
        m
    }

    pub fn cluster_members(&self, c: usize) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == c)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Learnable per-cluster attention weights.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MaskParams {
    pub w: Vec<f64>,
}

impl MaskParams {
    /// All clusters half-selected at the start; no region is excluded.
    pub fn zeros(kappa: usize) -> Self {
        MaskParams { w: vec![0.0; kappa] }
    }
}

/// Activation mapping raw weights to [0, 1] attention values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaskActivation {
    /// Smooth sigmoid; the training default.
    Sigmoid,
    /// Clamped linear map w -> clamp(0.5 + 0.5 w, 0, 1).
    HardTanh,
}

/// Per-node soft selection weights in [0, 1], constant within each cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeMask {
    pub m: Vec<f64>,
}

impl NodeMask {
    pub fn hard(nodes: &[usize], n: usize) -> Self {
        let mut m = vec![0.0; n];
        for &i in nodes {
            m[i] = 1.0;
        }
        NodeMask { m }
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    /// Indices with weight strictly above the threshold.
    pub fn thresholded(&self, threshold: f64) -> Vec<usize> {
        self.m
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > threshold)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn to_selector(&self) -> Result<NodeSelector> {
        NodeSelector::soft(self.m.clone())
    }
}

/// Cluster attention a_i = activation(w_i).
pub fn cluster_attention(params: &MaskParams, activation: MaskActivation) -> Vec<f64> {
    params
        .w
        .iter()
        .map(|&w| match activation {
            MaskActivation::Sigmoid => sigmoid(w),
            MaskActivation::HardTanh => (0.5 + 0.5 * w).clamp(0.0, 1.0),
        })
        .collect()
}

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Derivative of the attention activation with respect to w.
pub fn attention_grad(w: f64, activation: MaskActivation) -> f64 {
    match activation {
        MaskActivation::Sigmoid => {
            let a = sigmoid(w);
            a * (1.0 - a)
        }
        MaskActivation::HardTanh => {
            if (-1.0..1.0).contains(&w) {
                0.5
            } else {
                0.0
            }
        }
    }
}

/// Broadcast cluster attention to nodes: m = M^T a.
pub fn node_mask(assign: &ClusterAssignment, attention: &[f64]) -> Result<NodeMask> {
    if attention.len() != assign.kappa {
        return Err(Error::DimensionMismatch {
            context: "attention length",
            expected: assign.kappa,
            got: attention.len(),
        });
    }
    let m = assign.labels.iter().map(|&l| attention[l]).collect();
    Ok(NodeMask { m })
}

/// Intersection-over-union of two thresholded masks. Both-empty is 1.
pub fn mask_iou(predicted: &NodeMask, truth: &NodeMask, threshold: f64) -> Result<f64> {
    if predicted.len() != truth.len() {
        return Err(Error::DimensionMismatch {
            context: "mask length",
            expected: truth.len(),
            got: predicted.len(),
        });
    }
    let mut inter = 0usize;
    let mut union = 0usize;
    for (&p, &t) in predicted.m.iter().zip(&truth.m) {
        let p_in = p > threshold;
        let t_in = t > threshold;
        if p_in && t_in {
            inter += 1;
        }
        if p_in || t_in {
            union += 1;
        }
    }
    if union == 0 {
        Ok(1.0)
    } else {
        Ok(inter as f64 / union as f64)
    }
}

/// Spectral clustering: rows of the first kappa normalized-Laplacian
/// eigenvectors, row-normalized, then k-means with k-means++ seeding.
/// Deterministic for a fixed seed; an empty cluster triggers up to 5
/// internal re-seeds before failing.
pub fn spectral_cluster(graph: &Graph, kappa: usize, seed: u64) -> Result<ClusterAssignment> {
    let n = graph.n_nodes();
    if kappa > n {
        return Err(Error::TooManyClusters { kappa, n });
    }
    if kappa == 0 {
        return Err(Error::InvalidConfig("kappa must be positive".into()));
    }
    if kappa == 1 {
        return ClusterAssignment::from_labels(1, vec![0; n]);
    }
    let eig = graph::graph_eigensystem(graph, LaplacianKind::Normalized)?;
    let mut embedding = eig.band(kappa);
    for i in 0..n {
        let row = embedding.row_mut(i);
        let norm: f64 = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-12 {
            for v in row {
                *v /= norm;
            }
        }
    }

    const MAX_RESTARTS: usize = 5;
    for restart in 0..MAX_RESTARTS {
        let labels = kmeans(&embedding, kappa, rng::derive(seed, restart as u64))?;
        if let Ok(assign) = ClusterAssignment::from_labels(kappa, labels) {
            return Ok(assign);
        }
    }
    Err(Error::EmptyCluster {
        restarts: MAX_RESTARTS,
    })
}

const KMEANS_MAX_ITER: usize = 100;
const KMEANS_SHIFT_TOL: f64 = 1e-6;

/// Lloyd iterations with k-means++ seeding over the rows of `points`.
fn kmeans(points: &Mat, k: usize, seed: u64) -> Result<Vec<usize>> {
    let n = points.rows();
    let d = points.cols();
    let mut rng = rng::seeded(seed);

    // k-means++ seeding.
    let mut centers = Mat::zeros(k, d);
    let first = rng.gen_range(0..n);
    centers.row_mut(0).copy_from_slice(points.row(first));
    let mut dist2 = vec![f64::INFINITY; n];
    for c in 1..k {
        for i in 0..n {
            let dd = sq_dist(points.row(i), centers.row(c - 1));
            if dd < dist2[i] {
                dist2[i] = dd;
            }
        }
        let total: f64 = dist2.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.gen::<f64>() * total;
            let mut chosen = n - 1;
            for (i, &dd) in dist2.iter().enumerate() {
                target -= dd;
                if target <= 0.0 {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            // All points coincide with existing centers; any choice works.
            rng.gen_range(0..n)
        };
        centers.row_mut(c).copy_from_slice(points.row(pick));
    }

    let mut labels = vec![0usize; n];
    for _ in 0..KMEANS_MAX_ITER {
        // Assignment step.
        for i in 0..n {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for c in 0..k {
                let dd = sq_dist(points.row(i), centers.row(c));
                if dd < best_d {
                    best_d = dd;
                    best = c;
                }
            }
            labels[i] = best;
        }
        // Update step.
        let mut sums = Mat::zeros(k, d);
        let mut counts = vec![0usize; k];
        for i in 0..n {
            counts[labels[i]] += 1;
            let row = points.row(i);
            for (s, &v) in sums.row_mut(labels[i]).iter_mut().zip(row) {
                *s += v;
            }
        }
        let mut max_shift: f64 = 0.0;
        for c in 0..k {
            if counts[c] == 0 {
                continue;
            }
            let inv = 1.0 / counts[c] as f64;
            let mut shift = 0.0;
            for (j, s) in sums.row(c).iter().enumerate() {
                let newv = s * inv;
                shift += (newv - centers[(c, j)]).powi(2);
                centers[(c, j)] = newv;
            }
            max_shift = max_shift.max(shift.sqrt());
        }
        if max_shift < KMEANS_SHIFT_TOL {
            break;
        }
    }
    Ok(labels)
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum()
}

/// Serialized mask dump.
#[derive(Serialize, Deserialize)]
pub struct MaskDump {
    pub kappa: usize,
    pub attention: Vec<f64>,
    pub mask: Vec<f64>,
    pub selected_nodes: Vec<usize>,
}

pub fn save_mask_json(
    path: &Path,
    assign: &ClusterAssignment,
    attention: &[f64],
    mask: &NodeMask,
) -> Result<()> {
    let dump = MaskDump {
        kappa: assign.kappa,
        attention: attention.to_vec(),
        mask: mask.m.clone(),
        selected_nodes: mask.thresholded(0.5),
    };
    std::fs::write(path, serde_json::to_string_pretty(&dump)?)?;
    Ok(())
}

pub fn load_mask_json(path: &Path) -> Result<MaskDump> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

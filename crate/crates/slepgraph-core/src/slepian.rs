//! Slepian harmonics on graphs: selection matrices, concentration matrices,
//! and the basis computation under the energy-concentration and modified
//! embedded-distance criteria, plus the spacelimited dual.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::EigenSystem;
use crate::linalg::{self, Mat};

/// Bandwidth selector: keep the first K (lowest-frequency) Laplacian modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BandSelector {
    pub k: usize,
}

impl BandSelector {
    pub fn new(k: usize) -> Self {
        assert!(k >= 1, "bandwidth must be at least 1");
        BandSelector { k }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.k > n {
            return Err(Error::BandTooLarge { k: self.k, n });
        }
        Ok(())
    }
}

/// Node selector: per-node weights in [0, 1]. Hard subsets use exact 0/1
/// entries; soft selectors carry fractional weights (the differentiable
/// mask path relies on these).
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSelector {
    weights: Vec<f64>,
}

impl NodeSelector {
    pub fn soft(weights: Vec<f64>) -> Result<Self> {
        if weights
            .iter()
            .any(|&w| !(0.0..=1.0).contains(&w) || !w.is_finite())
        {
            return Err(Error::InvalidSelector("weights must lie in [0, 1]".into()));
        }
        if weights.iter().all(|&w| w <= 0.0) {
            return Err(Error::InvalidSelector(
                "at least one weight must be positive".into(),
            ));
        }
        Ok(NodeSelector { weights })
    }

    /// Hard selector from a 0-based node subset.
    pub fn hard(nodes: &[usize], n: usize) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidSelector("empty node subset".into()));
        }
        let mut weights = vec![0.0; n];
        for &i in nodes {
            if i >= n {
                return Err(Error::NodeOutOfRange { index: i, n_nodes: n });
            }
            weights[i] = 1.0;
        }
        Ok(NodeSelector { weights })
    }

    pub fn full(n: usize) -> Self {
        NodeSelector {
            weights: vec![1.0; n],
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// True when every weight is exactly 0 or exactly 1.
    pub fn is_hard(&self) -> bool {
        self.weights.iter().all(|&w| w == 0.0 || w == 1.0)
    }

    /// Count of weights above 0.5.
    pub fn n_selected(&self) -> usize {
        self.weights.iter().filter(|&&w| w > 0.5).count()
    }

    /// 0-based indices of selected (weight > 0.5) nodes.
    pub fn selected_nodes(&self) -> Vec<usize> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.5)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn validate_for(&self, n: usize) -> Result<()> {
        if self.weights.len() != n {
            return Err(Error::DimensionMismatch {
                context: "node selector length",
                expected: n,
                got: self.weights.len(),
            });
        }
        Ok(())
    }
}

/// Which Slepian optimization criterion produced a basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlepianVariant {
    /// Energy concentration: eigenvectors of C, values mu descending.
    Energy,
    /// Modified embedded distance: eigenvectors of C_emb, values xi ascending.
    Embedded,
}

/// A Slepian basis: K node-domain harmonics (columns of `harmonics`),
/// bandlimited to the first K Laplacian modes, with their concentration
/// values (mu, descending) or embedded distances (xi, ascending).
#[derive(Debug, Clone)]
pub struct SlepianBasis {
    pub harmonics: Mat,
    pub values: Vec<f64>,
    pub variant: SlepianVariant,
    pub band: BandSelector,
    pub nodes: NodeSelector,
}

/// Spacelimited harmonics z' = S_V U S_B z_hat. Columns vanish exactly off
/// the selected subset; column squared norms equal the concentration values,
/// so the columns are not orthonormal like a [`SlepianBasis`].
#[derive(Debug, Clone)]
pub struct SpacelimitedBasis {
    pub harmonics: Mat,
    pub values: Vec<f64>,
    pub band: BandSelector,
    pub nodes: NodeSelector,
}

/// Diagonal band and node selection matrices (S_B, S_V).
pub fn selection_matrices(
    band: BandSelector,
    nodes: &NodeSelector,
    n: usize,
) -> Result<(Mat, Mat)> {
    band.validate(n)?;
    nodes.validate_for(n)?;
    let mut s_b = Mat::zeros(n, n);
    for i in 0..band.k {
        s_b[(i, i)] = 1.0;
    }
    let mut s_v = Mat::zeros(n, n);
    for (i, &w) in nodes.weights().iter().enumerate() {
        s_v[(i, i)] = w;
    }
    Ok((s_b, s_v))
}

/// Energy concentration matrix C = S_B^T U^T S_V U S_B restricted to its
/// leading K x K block. Formed as (sqrt(S_V) U_K)^T (sqrt(S_V) U_K) so the
/// result is symmetric positive semi-definite by construction.
pub fn concentration_matrix(
    eig: &EigenSystem,
    band: BandSelector,
    nodes: &NodeSelector,
) -> Result<Mat> {
    let n = eig.n();
    band.validate(n)?;
    nodes.validate_for(n)?;
    let mut weighted = eig.band(band.k);
    for (i, &w) in nodes.weights().iter().enumerate() {
        let s = w.sqrt();
        for v in weighted.row_mut(i) {
            *v *= s;
        }
    }
    Ok(weighted.tr_mul(&weighted))
}

/// Modified concentration matrix C_emb = Lambda_K^{1/2} C Lambda_K^{1/2}.
/// Eigenvalues that are zero up to eigensolver noise (including tiny
/// negatives) are snapped to exact zero before the square root, which would
/// otherwise amplify 1e-16 noise into 1e-8 entries.
pub fn embedded_concentration_matrix(
    eig: &EigenSystem,
    band: BandSelector,
    nodes: &NodeSelector,
) -> Result<Mat> {
    let c = concentration_matrix(eig, band, nodes)?;
    let lam_max = eig.eigenvalues.last().copied().unwrap_or(0.0).abs();
    let zero_tol = 1e-12 * lam_max.max(1.0);
    let sqrt_lam: Vec<f64> = eig.eigenvalues[..band.k]
        .iter()
        .map(|&l| if l < zero_tol { 0.0 } else { l.sqrt() })
        .collect();
    let k = band.k;
    let mut c_emb = c;
    for i in 0..k {
        for j in 0..k {
            c_emb[(i, j)] *= sqrt_lam[i] * sqrt_lam[j];
        }
    }
    Ok(c_emb)
}

/// Shared eigensolve-and-lift step: decompose the K x K criterion matrix,
/// order its eigenpairs, clamp tiny negative values, and lift the hatted
/// vectors to the node domain through the first K Fourier modes.
fn lift_basis(
    eig: &EigenSystem,
    band: BandSelector,
    criterion: &Mat,
    descending: bool,
) -> Result<(Mat, Vec<f64>)> {
    let (vals, vecs) = linalg::sym_eig(criterion)?;
    let k = band.k;
    let order: Vec<usize> = if descending {
        // Descending by value; ties keep ascending original index.
        let mut idx: Vec<usize> = (0..k).collect();
        idx.sort_by(|&a, &b| vals[b].partial_cmp(&vals[a]).unwrap().then(a.cmp(&b)));
        idx
    } else {
        (0..k).collect()
    };
    let values: Vec<f64> = order
        .iter()
        .map(|&i| if vals[i] < 0.0 { 0.0 } else { vals[i] })
        .collect();
    let mut hatted = Mat::zeros(k, k);
    for (new_j, &old_j) in order.iter().enumerate() {
        hatted.set_column(new_j, &vecs.column(old_j));
    }
    let mut harmonics = eig.band(k).mul(&hatted);
    for j in 0..k {
        let mut col = harmonics.column(j);
        linalg::canonicalize_sign(&mut col);
        harmonics.set_column(j, &col);
    }
    Ok((harmonics, values))
}

/// Slepian basis under the energy concentration criterion: eigenvectors of C
/// lifted to the node domain, ordered by concentration mu descending.
pub fn slepians_energy(
    eig: &EigenSystem,
    band: BandSelector,
    nodes: &NodeSelector,
) -> Result<SlepianBasis> {
    let c = concentration_matrix(eig, band, nodes)?;
    let (harmonics, values) = lift_basis(eig, band, &c, true)?;
    Ok(SlepianBasis {
        harmonics,
        values,
        variant: SlepianVariant::Energy,
        band,
        nodes: nodes.clone(),
    })
}

/// Slepian basis under the modified embedded distance criterion:
/// eigenvectors of C_emb lifted to the node domain, ordered by xi ascending
/// (the criterion is a minimization).
pub fn slepians_embedded(
    eig: &EigenSystem,
    band: BandSelector,
    nodes: &NodeSelector,
) -> Result<SlepianBasis> {
    let c_emb = embedded_concentration_matrix(eig, band, nodes)?;
    let (harmonics, values) = lift_basis(eig, band, &c_emb, false)?;
    Ok(SlepianBasis {
        harmonics,
        values,
        variant: SlepianVariant::Embedded,
        band,
        nodes: nodes.clone(),
    })
}

/// Spacelimited Slepian harmonics z' = S_V U S_B z_hat for a hard node
/// subset. Every column vanishes exactly off the subset, and the column
/// squared norms equal the eigenvalues of C.
pub fn spacelimited_slepians(
    eig: &EigenSystem,
    band: BandSelector,
    nodes: &NodeSelector,
) -> Result<SpacelimitedBasis> {
    if !nodes.is_hard() {
        return Err(Error::SoftSelectorRejected);
    }
    let energy = slepians_energy(eig, band, nodes)?;
    let mut harmonics = energy.harmonics;
    for (i, &w) in nodes.weights().iter().enumerate() {
        if w == 0.0 {
            for v in harmonics.row_mut(i) {
                *v = 0.0;
            }
        }
    }
    Ok(SpacelimitedBasis {
        harmonics,
        values: energy.values,
        band,
        nodes: nodes.clone(),
    })
}

/// Weighted in-subset energy sum_i m_i * signal(i)^2.
pub fn subset_energy(signal: &[f64], nodes: &NodeSelector) -> Result<f64> {
    nodes.validate_for(signal.len())?;
    Ok(signal
        .iter()
        .zip(nodes.weights())
        .map(|(&s, &m)| m * s * s)
        .sum())
}

impl SlepianBasis {
    pub fn n(&self) -> usize {
        self.harmonics.rows()
    }

    pub fn k(&self) -> usize {
        self.band.k
    }

    /// Write the basis as CSV: a header row, then one row per harmonic with
    /// its index, value, and node-domain entries.
    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
        write!(file, "k,value")?;
        for i in 0..self.n() {
            write!(file, ",z({i})")?;
        }
        writeln!(file)?;
        for k in 0..self.k() {
            write!(file, "{k},{:.17e}", self.values[k])?;
            for i in 0..self.n() {
                write!(file, ",{:.17e}", self.harmonics[(i, k)])?;
            }
            writeln!(file)?;
        }
        Ok(())
    }
}

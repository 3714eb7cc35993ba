//! Graph Slepian spectral analysis and the SlepNet learning architecture.
//!
//! The crate builds up from dense spectral graph machinery (Laplacians, the
//! graph Fourier transform, spectral convolution) to Slepian bases localized
//! on node subsets, a differentiable subgraph-mask learner, Slepian
//! spectral-filter networks trained by gradient descent, a neural eigenmap
//! for large graphs, synthetic benchmark generators, and trajectory
//! curvature analysis.

pub mod analysis;
pub mod eigenmap;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod mask;
pub mod model;
pub mod rng;
pub mod slepian;
pub mod synth;
pub mod train;

pub use error::{Error, Result};
pub use linalg::Mat;

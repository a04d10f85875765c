//! Random-walk graph embeddings for model selection.
//!
//! This crate holds the numerical core: an immutable undirected graph,
//! seeded generators for the Erdős–Rényi, two-block SBM and planted-clique
//! families, random-walk trajectory features, the landmark (`walk2vec`) and
//! sparse-coded (`walk2vec-sc`) whole-graph embeddings, a topological
//! baseline, a random forest with AUC scoring and a small PCA.
//!
//! Everything here is `no_std` + `alloc`; file formats, experiment sweeps and
//! the command-line front end live in the `walk2vec` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod embed;
pub mod error;
pub mod forest;
pub mod generators;
pub mod graph;
pub mod linalg;
pub mod metrics;
pub mod pca;
pub mod rng;
pub mod sparse;
pub mod thresholds;
pub mod topo;
pub mod walk;

pub use embed::{embed_walk2vec, EmbeddingMethod, GraphEmbedding};
pub use error::{Error, Result};
pub use forest::{Forest, LabeledDataset};
pub use generators::ModelParams;
pub use graph::{Graph, Permutation};
pub use metrics::auc;
pub use pca::pca_2d;
pub use rng::Seed;
pub use sparse::{Dictionary, PoolingMode};
pub use thresholds::{beta_crit, delta_crit};
pub use topo::{topo_features, TopoFeatureVector};
pub use walk::{InitialDistribution, Metric, WalkFeature, WalkTrajectory};

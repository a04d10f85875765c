//! Whole-graph embeddings.

use alloc::vec::Vec;

use crate::error::Result;
use crate::graph::Graph;
use crate::walk::{select_degree_landmarks, walk_feature, InitialDistribution, Landmarks, Metric};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum EmbeddingMethod {
    Walk2vec,
    Walk2vecSc,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphEmbedding {
    pub values: Vec<f64>,
    pub method: EmbeddingMethod,
    pub tau: usize,
}

impl GraphEmbedding {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Length of a landmark embedding: four stacked walk features.
pub const fn walk2vec_dim(tau: usize) -> usize {
    2 * (tau * tau + tau)
}

/// Walk features from delta starts at the max-, min-, median- and
/// mean-degree landmarks, stacked in that order.
pub fn embed_walk2vec(g: &Graph, tau: usize, metric: Metric) -> Result<GraphEmbedding> {
    embed_walk2vec_with_landmarks(g, tau, metric).map(|(e, _)| e)
}

pub fn embed_walk2vec_with_landmarks(
    g: &Graph,
    tau: usize,
    metric: Metric,
) -> Result<(GraphEmbedding, Landmarks)> {
    let landmarks = select_degree_landmarks(g)?;
    let mut values = Vec::with_capacity(walk2vec_dim(tau));
    for node in landmarks.as_array() {
        let p0 = InitialDistribution::delta(g.n(), node)?;
        values.extend_from_slice(walk_feature(g, &p0, tau, metric)?.values());
    }
    Ok((GraphEmbedding { values, method: EmbeddingMethod::Walk2vec, tau }, landmarks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn cycle_gives_four_identical_blocks() {
        let edges: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        let g = Graph::from_edge_list(6, &edges).unwrap();
        let e = embed_walk2vec(&g, 4, Metric::Distance).unwrap();
        assert_eq!(e.len(), walk2vec_dim(4));
        let block = &e.values[..10];
        for k in 1..4 {
            assert_eq!(&e.values[10 * k..10 * (k + 1)], block);
        }
    }

    #[test]
    fn dimension_for_tau_15() {
        assert_eq!(walk2vec_dim(15), 480);
        let g = crate::generators::gen_er(30, 0.3, crate::Seed(1)).unwrap();
        assert_eq!(embed_walk2vec(&g, 15, Metric::Distance).unwrap().len(), 480);
    }
}

//! The 26-value topological baseline.
//!
//! Layout (each 4-block is max, min, mean, population std over nodes):
//!
//! | index  | feature                                         |
//! |--------|-------------------------------------------------|
//! | 0–3    | degree centrality `d_i / (n − 1)`               |
//! | 4–7    | betweenness, normalized by `(n − 1)(n − 2) / 2` |
//! | 8–11   | closeness `(n − 1) / Σ_j dist(i, j)`            |
//! | 12–15  | clustering coefficient                          |
//! | 16     | diameter                                        |
//! | 17     | radius                                          |
//! | 18–21  | triangles through each node                     |
//! | 22–25  | mean shortest-path length from each node        |

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const TOPO_DIM: usize = 26;

#[derive(Debug, Clone, PartialEq)]
pub struct TopoFeatureVector {
    pub values: [f64; TOPO_DIM],
}

/// `(max, min, mean, population std)`.
pub fn four_stats(xs: &[f64]) -> [f64; 4] {
    let n = xs.len() as f64;
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    [max, min, mean, libm::sqrt(var)]
}

/// Per-node shortest-path summaries from one BFS per source.
pub struct PathSummary {
    /// Raw Brandes scores: each unordered pair counted once.
    pub betweenness: Vec<f64>,
    pub distance_sums: Vec<usize>,
    pub eccentricity: Vec<usize>,
}

/// Brandes accumulation over all sources in increasing order.
///
/// The dependency of `v` is accumulated as
/// `δ(v) = σ(v) Σ_{w: succ} (1 + δ(w)) / σ(w)`, so each edge costs one
/// addition. Nodes on the deepest BFS level have no successors and are
/// skipped in both passes once every node has been reached.
pub fn path_summary(g: &Graph) -> Result<PathSummary> {
    let n = g.n();
    let mut betweenness = vec![0.0; n];
    let mut distance_sums = vec![0usize; n];
    let mut eccentricity = vec![0usize; n];

    const UNSEEN: u32 = u32::MAX;
    let mut dist = vec![UNSEEN; n];
    let mut sigma = vec![0.0f64; n];
    let mut coef = vec![0.0f64; n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for s in 0..n {
        dist.iter_mut().for_each(|d| *d = UNSEEN);
        sigma.iter_mut().for_each(|x| *x = 0.0);
        order.clear();
        dist[s] = 0;
        sigma[s] = 1.0;
        order.push(s);
        let mut head = 0;
        let mut deepest = UNSEEN;
        while head < order.len() {
            let v = order[head];
            head += 1;
            let dv = dist[v];
            if dv == deepest {
                continue;
            }
            let sv = sigma[v];
            if order.len() == n {
                // nothing left to discover: a branch-free path count update
                for &w in g.neighbors(v) {
                    let w = w as usize;
                    sigma[w] += f64::from(u8::from(dist[w] == dv + 1)) * sv;
                }
                continue;
            }
            for &w in g.neighbors(v) {
                let w = w as usize;
                if dist[w] == UNSEEN {
                    dist[w] = dv + 1;
                    order.push(w);
                    if order.len() == n {
                        deepest = dv + 1;
                    }
                }
                if dist[w] == dv + 1 {
                    sigma[w] += sv;
                }
            }
        }
        if order.len() != n {
            return Err(Error::Disconnected);
        }
        distance_sums[s] = dist.iter().map(|&d| d as usize).sum();
        let max_level = dist[*order.last().unwrap()];
        eccentricity[s] = max_level as usize;
        for &v in order.iter().rev() {
            let dv = dist[v];
            let mut acc = 0.0;
            if dv != max_level {
                for &w in g.neighbors(v) {
                    let w = w as usize;
                    acc += f64::from(u8::from(dist[w] == dv + 1)) * coef[w];
                }
            }
            let delta = sigma[v] * acc;
            coef[v] = (1.0 + delta) / sigma[v];
            if v != s {
                betweenness[v] += delta;
            }
        }
    }
    // every unordered pair was accumulated from both endpoints
    betweenness.iter_mut().for_each(|b| *b /= 2.0);
    Ok(PathSummary { betweenness, distance_sums, eccentricity })
}

pub fn topo_features(g: &Graph) -> Result<TopoFeatureVector> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidParameter("topological features need n >= 2"));
    }
    let paths = path_summary(g)?;
    let nm1 = (n - 1) as f64;
    let pair_norm = (n - 1) as f64 * (n as f64 - 2.0) / 2.0;

    let degree: Vec<f64> = (0..n).map(|i| g.degree(i) as f64 / nm1).collect();
    let betweenness: Vec<f64> = paths
        .betweenness
        .iter()
        .map(|&b| if pair_norm > 0.0 { b / pair_norm } else { 0.0 })
        .collect();
    let closeness: Vec<f64> = paths.distance_sums.iter().map(|&s| nm1 / s as f64).collect();
    let triangle_counts = g.triangle_counts();
    let clustering = g.clustering_from_triangles(&triangle_counts);
    let triangles: Vec<f64> = triangle_counts.into_iter().map(|t| t as f64).collect();
    let avg_path: Vec<f64> = paths.distance_sums.iter().map(|&s| s as f64 / nm1).collect();
    let diameter = *paths.eccentricity.iter().max().unwrap() as f64;
    let radius = *paths.eccentricity.iter().min().unwrap() as f64;

    let mut values = [0.0; TOPO_DIM];
    values[0..4].copy_from_slice(&four_stats(&degree));
    values[4..8].copy_from_slice(&four_stats(&betweenness));
    values[8..12].copy_from_slice(&four_stats(&closeness));
    values[12..16].copy_from_slice(&four_stats(&clustering));
    values[16] = diameter;
    values[17] = radius;
    values[18..22].copy_from_slice(&four_stats(&triangles));
    values[22..26].copy_from_slice(&four_stats(&avg_path));
    Ok(TopoFeatureVector { values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_closed_forms() {
        let edges: Vec<_> = (0..4).flat_map(|i| ((i + 1)..4).map(move |j| (i, j))).collect();
        let g = Graph::from_edge_list(4, &edges).unwrap();
        let f = topo_features(&g).unwrap().values;
        assert_eq!(&f[0..4], &[1.0, 1.0, 1.0, 0.0]);
        assert_eq!(&f[4..8], &[0.0; 4]);
        assert_eq!((f[16], f[17]), (1.0, 1.0));
        assert_eq!(&f[18..22], &[3.0, 3.0, 3.0, 0.0]);
    }

    #[test]
    fn path_betweenness() {
        let g = Graph::from_edge_list(3, &[(0, 1), (1, 2)]).unwrap();
        let paths = path_summary(&g).unwrap();
        assert_eq!(paths.betweenness, vec![0.0, 1.0, 0.0]);
        let f = topo_features(&g).unwrap().values;
        assert_eq!(f[4], 1.0);
        assert_eq!((f[16], f[17]), (2.0, 1.0));
    }

    #[test]
    fn disconnected_rejected() {
        let g = Graph::from_edge_list(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(topo_features(&g), Err(Error::Disconnected));
    }
}

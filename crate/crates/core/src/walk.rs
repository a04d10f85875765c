//! Random-walk trajectories and the features derived from them.
//!
//! A walk started from `p0` evolves as `p_t = Wᵀ p_{t−1}` with
//! `W = D⁻¹A`. The feature of a trajectory `p_0 … p_τ` is the strict upper
//! triangle of the pairwise matrix
//!
//! ```text
//! M[s][t] = ‖D^{-1/2} (p_s − p_t)‖₂
//! ```
//!
//! or of the cosine-similarity matrix `S` built from the same weighted inner
//! product. Features are flattened row-major over `(s, t)`, `s < t`, giving
//! `(τ² + τ) / 2` values regardless of the graph size.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::Matrix;

/// Relative tolerance used when comparing PageRank scores for ties.
pub const PAGERANK_TIE_TOL: f64 = 1e-9;

const DISTRIBUTION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Metric {
    #[default]
    Distance,
    Similarity,
}

/// Length of a walk feature for `tau` steps.
pub const fn feature_dim(tau: usize) -> usize {
    (tau * tau + tau) / 2
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialDistribution {
    probs: Vec<f64>,
}

impl InitialDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Empty);
        }
        if probs.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        if probs.iter().any(|&p| p < 0.0) {
            return Err(Error::InvalidParameter("negative probability"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > DISTRIBUTION_TOL {
            return Err(Error::InvalidParameter("probabilities do not sum to 1"));
        }
        Ok(InitialDistribution { probs })
    }

    pub fn delta(n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::NodeOutOfRange { node: i, n });
        }
        let mut probs = vec![0.0; n];
        probs[i] = 1.0;
        Ok(InitialDistribution { probs })
    }

    /// Uniform over node `i` and its neighbors.
    pub fn ego_uniform(g: &Graph, i: usize) -> Result<Self> {
        let n = g.n();
        if i >= n {
            return Err(Error::NodeOutOfRange { node: i, n });
        }
        let mass = 1.0 / (g.degree(i) + 1) as f64;
        let mut probs = vec![0.0; n];
        probs[i] = mass;
        for &j in g.neighbors(i) {
            probs[j as usize] = mass;
        }
        Ok(InitialDistribution { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkTrajectory {
    steps: Vec<Vec<f64>>,
}

impl WalkTrajectory {
    pub fn tau(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn steps(&self) -> &[Vec<f64>] {
        &self.steps
    }

    pub fn step(&self, t: usize) -> &[f64] {
        &self.steps[t]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkFeature {
    values: Vec<f64>,
}

impl WalkFeature {
    pub fn from_values(values: Vec<f64>) -> Self {
        WalkFeature { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn inverse_degrees(g: &Graph) -> Result<Vec<f64>> {
    g.require_min_degree()?;
    Ok((0..g.n()).map(|i| 1.0 / g.degree(i) as f64).collect())
}

fn step_with(g: &Graph, inv_deg: &[f64], p: &[f64], scaled: &mut [f64], out: &mut [f64]) {
    for ((s, &pi), &w) in scaled.iter_mut().zip(p).zip(inv_deg) {
        *s = pi * w;
    }
    for (j, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for &i in g.neighbors(j) {
            acc += scaled[i as usize];
        }
        *o = acc;
    }
}

/// One step `Wᵀ p`: `out_j = Σ_{i ∈ adj(j)} p_i / d_i`.
pub fn transition_step(g: &Graph, p: &[f64]) -> Result<Vec<f64>> {
    if p.len() != g.n() {
        return Err(Error::SizeMismatch { expected: g.n(), found: p.len() });
    }
    let inv_deg = inverse_degrees(g)?;
    let mut scaled = vec![0.0; p.len()];
    let mut out = vec![0.0; p.len()];
    step_with(g, &inv_deg, p, &mut scaled, &mut out);
    Ok(out)
}

pub fn walk_trajectory(g: &Graph, p0: &InitialDistribution, tau: usize) -> Result<WalkTrajectory> {
    if tau == 0 {
        return Err(Error::InvalidParameter("tau must be at least 1"));
    }
    let n = g.n();
    if p0.len() != n {
        return Err(Error::SizeMismatch { expected: n, found: p0.len() });
    }
    let inv_deg = inverse_degrees(g)?;
    let mut scaled = vec![0.0; n];
    let mut steps = Vec::with_capacity(tau + 1);
    steps.push(p0.probs().to_vec());
    for t in 1..=tau {
        let mut next = vec![0.0; n];
        step_with(g, &inv_deg, &steps[t - 1], &mut scaled, &mut next);
        steps.push(next);
    }
    Ok(WalkTrajectory { steps })
}

/// `ω_i = d_i / Σ_k d_k`.
pub fn stationary_distribution(g: &Graph) -> Result<Vec<f64>> {
    g.require_min_degree()?;
    let total = (2 * g.edge_count()) as f64;
    Ok((0..g.n()).map(|i| g.degree(i) as f64 / total).collect())
}

fn inverse_of(degs: &[usize]) -> Result<Vec<f64>> {
    degs.iter()
        .enumerate()
        .map(|(i, &d)| if d == 0 { Err(Error::IsolatedNode(i)) } else { Ok(1.0 / d as f64) })
        .collect()
}

fn check_lengths(traj: &WalkTrajectory, degs: &[usize]) -> Result<()> {
    let n = traj.steps[0].len();
    if degs.len() != n {
        return Err(Error::SizeMismatch { expected: n, found: degs.len() });
    }
    Ok(())
}

/// `M[s][t] = sqrt(Σ_i (p_s[i] − p_t[i])² / d_i)`.
pub fn distance_matrix(traj: &WalkTrajectory, degs: &[usize]) -> Result<Matrix> {
    check_lengths(traj, degs)?;
    let inv = inverse_of(degs)?;
    let k = traj.steps.len();
    let mut m = Matrix::zeros(k, k);
    for s in 0..k {
        for t in (s + 1)..k {
            let mut acc = 0.0;
            for ((a, b), w) in traj.steps[s].iter().zip(&traj.steps[t]).zip(&inv) {
                let diff = a - b;
                acc += diff * diff * w;
            }
            let v = libm::sqrt(acc);
            m[(s, t)] = v;
            m[(t, s)] = v;
        }
    }
    Ok(m)
}

/// Cosine similarity between steps under the `D⁻¹` inner product.
pub fn similarity_matrix(traj: &WalkTrajectory, degs: &[usize]) -> Result<Matrix> {
    check_lengths(traj, degs)?;
    let inv = inverse_of(degs)?;
    let k = traj.steps.len();
    let weighted_dot = |a: &[f64], b: &[f64]| -> f64 {
        let mut acc = 0.0;
        for ((x, y), w) in a.iter().zip(b).zip(&inv) {
            acc += x * y * w;
        }
        acc
    };
    let norms: Vec<f64> = traj
        .steps
        .iter()
        .map(|p| libm::sqrt(weighted_dot(p, p)))
        .collect();
    if let Some(t) = norms.iter().position(|&v| v == 0.0) {
        return Err(Error::ZeroNormStep(t));
    }
    let mut m = Matrix::zeros(k, k);
    for s in 0..k {
        m[(s, s)] = 1.0;
        for t in (s + 1)..k {
            let v = cosine(weighted_dot(&traj.steps[s], &traj.steps[t]), norms[s], norms[t]);
            m[(s, t)] = v;
            m[(t, s)] = v;
        }
    }
    Ok(m)
}

#[inline]
fn cosine(dot: f64, norm_s: f64, norm_t: f64) -> f64 {
    (dot / (norm_s * norm_t)).clamp(0.0, 1.0)
}

/// Strict upper triangle, row-major: `(0,1), (0,2), …, (τ−1,τ)`.
pub fn triu_strict(m: &Matrix) -> Vec<f64> {
    let k = m.rows();
    let mut out = Vec::with_capacity(k * (k - 1) / 2);
    for s in 0..k {
        for t in (s + 1)..k {
            out.push(m[(s, t)]);
        }
    }
    out
}

pub fn walk_feature(
    g: &Graph,
    p0: &InitialDistribution,
    tau: usize,
    metric: Metric,
) -> Result<WalkFeature> {
    let traj = walk_trajectory(g, p0, tau)?;
    let degs = g.degrees();
    let m = match metric {
        Metric::Distance => distance_matrix(&traj, &degs)?,
        Metric::Similarity => similarity_matrix(&traj, &degs)?,
    };
    Ok(WalkFeature { values: triu_strict(&m) })
}

const BLOCK: usize = 32;
type Lane = [f64; BLOCK];

/// Walk features for the delta distribution at every node, in node order.
///
/// Walks are advanced [`BLOCK`] start nodes at a time. Every per-lane
/// operation is the same sequence of floating-point operations as
/// [`walk_feature`] with [`InitialDistribution::delta`], so both paths agree
/// bit for bit.
pub fn node_delta_features(g: &Graph, tau: usize, metric: Metric) -> Result<Vec<WalkFeature>> {
    if tau == 0 {
        return Err(Error::InvalidParameter("tau must be at least 1"));
    }
    let n = g.n();
    let inv_deg = inverse_degrees(g)?;
    let dim = feature_dim(tau);
    let mut features = Vec::with_capacity(n);
    let mut steps: Vec<Vec<Lane>> = vec![vec![[0.0; BLOCK]; n]; tau + 1];
    let mut scaled: Vec<Lane> = vec![[0.0; BLOCK]; n];
    let mut norms: Vec<Lane> = vec![[0.0; BLOCK]; tau + 1];
    let mut block_values: Vec<Lane> = vec![[0.0; BLOCK]; dim];

    for start in (0..n).step_by(BLOCK) {
        let width = BLOCK.min(n - start);
        for row in steps[0].iter_mut() {
            *row = [0.0; BLOCK];
        }
        for b in 0..width {
            steps[0][start + b][b] = 1.0;
        }
        for t in 1..=tau {
            let (done, rest) = steps.split_at_mut(t);
            let prev = &done[t - 1];
            for ((s, p), &w) in scaled.iter_mut().zip(prev).zip(&inv_deg) {
                for b in 0..BLOCK {
                    s[b] = p[b] * w;
                }
            }
            for (j, out) in rest[0].iter_mut().enumerate() {
                let mut acc = [0.0; BLOCK];
                for &i in g.neighbors(j) {
                    let s = &scaled[i as usize];
                    for b in 0..BLOCK {
                        acc[b] += s[b];
                    }
                }
                *out = acc;
            }
        }

        match metric {
            Metric::Distance => {
                let mut idx = 0;
                for s in 0..=tau {
                    for t in (s + 1)..=tau {
                        let mut acc = [0.0; BLOCK];
                        for ((a, c), &w) in steps[s].iter().zip(&steps[t]).zip(&inv_deg) {
                            for b in 0..BLOCK {
                                let diff = a[b] - c[b];
                                acc[b] += diff * diff * w;
                            }
                        }
                        for b in 0..BLOCK {
                            acc[b] = libm::sqrt(acc[b]);
                        }
                        block_values[idx] = acc;
                        idx += 1;
                    }
                }
            }
            Metric::Similarity => {
                let weighted_dot = |x: &[Lane], y: &[Lane]| -> Lane {
                    let mut acc = [0.0; BLOCK];
                    for ((a, c), &w) in x.iter().zip(y).zip(&inv_deg) {
                        for b in 0..BLOCK {
                            acc[b] += a[b] * c[b] * w;
                        }
                    }
                    acc
                };
                for t in 0..=tau {
                    let sq = weighted_dot(&steps[t], &steps[t]);
                    for b in 0..BLOCK {
                        norms[t][b] = libm::sqrt(sq[b]);
                    }
                }
                let mut idx = 0;
                for s in 0..=tau {
                    for t in (s + 1)..=tau {
                        let d = weighted_dot(&steps[s], &steps[t]);
                        for b in 0..width {
                            if norms[s][b] == 0.0 || norms[t][b] == 0.0 {
                                let bad = if norms[s][b] == 0.0 { s } else { t };
                                return Err(Error::ZeroNormStep(bad));
                            }
                            block_values[idx][b] = cosine(d[b], norms[s][b], norms[t][b]);
                        }
                        idx += 1;
                    }
                }
            }
        }

        for b in 0..width {
            let values = block_values.iter().map(|lane| lane[b]).collect();
            features.push(WalkFeature { values });
        }
    }
    Ok(features)
}

/// Nodes selected as walk starting points for the landmark embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Landmarks {
    pub max: usize,
    pub min: usize,
    pub median: usize,
    pub mean: usize,
    /// True when no landmark needed the lowest-id fallback, i.e. every
    /// selection is determined by degree and PageRank alone.
    pub unique: bool,
}

impl Landmarks {
    /// In stacking order: max, min, median, mean.
    pub fn as_array(&self) -> [usize; 4] {
        [self.max, self.min, self.median, self.mean]
    }
}

/// Among `candidates`, the node with the highest (or lowest) PageRank;
/// scores within [`PAGERANK_TIE_TOL`] of the best tie and fall back to the
/// lowest node id. Returns `(node, resolved_without_fallback)`.
fn pick_by_pagerank(candidates: &[usize], pagerank: &[f64], prefer_high: bool) -> (usize, bool) {
    let best = candidates
        .iter()
        .map(|&i| pagerank[i])
        .fold(if prefer_high { f64::NEG_INFINITY } else { f64::INFINITY }, |acc, v| {
            if prefer_high { acc.max(v) } else { acc.min(v) }
        });
    let tied: Vec<usize> = candidates
        .iter()
        .copied()
        .filter(|&i| (pagerank[i] - best).abs() <= PAGERANK_TIE_TOL)
        .collect();
    (tied[0], tied.len() == 1)
}

fn closest_to(degs: &[usize], target: f64) -> Vec<usize> {
    let gap = |d: usize| (d as f64 - target).abs();
    let best = degs.iter().map(|&d| gap(d)).fold(f64::INFINITY, f64::min);
    (0..degs.len()).filter(|&i| gap(degs[i]) == best).collect()
}

/// Max-, min-, median- and mean-degree nodes with PageRank tie-breaking.
///
/// The median is the lower median of the degree sequence. Ties on degree
/// go to the highest PageRank, except for the minimum-degree landmark which
/// takes the lowest PageRank.
pub fn select_degree_landmarks(g: &Graph) -> Result<Landmarks> {
    let n = g.n();
    if n == 0 {
        return Err(Error::Empty);
    }
    let pagerank = g.default_pagerank()?;
    Ok(select_landmarks_with(&g.degrees(), &pagerank))
}

pub(crate) fn select_landmarks_with(degs: &[usize], pagerank: &[f64]) -> Landmarks {
    let n = degs.len();
    let max_deg = *degs.iter().max().unwrap();
    let min_deg = *degs.iter().min().unwrap();
    let with_degree = |d: usize| -> Vec<usize> { (0..n).filter(|&i| degs[i] == d).collect() };

    let mut sorted = degs.to_vec();
    sorted.sort_unstable();
    let median = sorted[(n - 1) / 2] as f64;
    let mean = degs.iter().sum::<usize>() as f64 / n as f64;

    let (max, u1) = pick_by_pagerank(&with_degree(max_deg), pagerank, true);
    let (min, u2) = pick_by_pagerank(&with_degree(min_deg), pagerank, false);
    let (median, u3) = pick_by_pagerank(&closest_to(degs, median), pagerank, true);
    let (mean, u4) = pick_by_pagerank(&closest_to(degs, mean), pagerank, true);
    Landmarks { max, min, median, mean, unique: u1 && u2 && u3 && u4 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::SQRT_2;

    fn k2() -> Graph {
        Graph::from_edge_list(2, &[(0, 1)]).unwrap()
    }

    fn path3() -> Graph {
        Graph::from_edge_list(3, &[(0, 1), (1, 2)]).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edge_list(n, &edges).unwrap()
    }

    fn star(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
        Graph::from_edge_list(n, &edges).unwrap()
    }

    fn uniform(n: usize) -> InitialDistribution {
        InitialDistribution::new(vec![1.0 / n as f64; n]).unwrap()
    }

    #[test]
    fn transition_examples() {
        assert_eq!(transition_step(&k2(), &[1.0, 0.0]).unwrap(), vec![0.0, 1.0]);
        assert_eq!(transition_step(&path3(), &[0.0, 1.0, 0.0]).unwrap(), vec![0.5, 0.0, 0.5]);
        let c = cycle(5);
        let out = transition_step(&c, &[0.2; 5]).unwrap();
        assert!(out.iter().all(|v| (v - 0.2).abs() < 1e-15));
        let isolated = Graph::from_edge_list(3, &[(0, 1)]).unwrap();
        assert_eq!(transition_step(&isolated, &[1.0, 0.0, 0.0]), Err(Error::IsolatedNode(2)));
    }

    #[test]
    fn k2_oscillates() {
        let p0 = InitialDistribution::delta(2, 0).unwrap();
        let traj = walk_trajectory(&k2(), &p0, 3).unwrap();
        assert_eq!(
            traj.steps(),
            &[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![0.0, 1.0]]
        );
        let one = walk_trajectory(&path3(), &InitialDistribution::delta(3, 0).unwrap(), 1).unwrap();
        assert_eq!(one.tau(), 1);
        assert_eq!(one.step(1), &[0.0, 1.0, 0.0]);
        assert!(walk_trajectory(&k2(), &p0, 0).is_err());
    }

    #[test]
    fn stationary_examples() {
        assert!(stationary_distribution(&cycle(6)).unwrap().iter().all(|v| (v - 1.0 / 6.0).abs() < 1e-15));
        assert_eq!(stationary_distribution(&star(4)).unwrap(), vec![0.5, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0]);
        assert_eq!(stationary_distribution(&path3()).unwrap(), vec![0.25, 0.5, 0.25]);
    }

    #[test]
    fn distance_examples() {
        let c = cycle(6);
        let traj = walk_trajectory(&c, &uniform(6), 4).unwrap();
        let m = distance_matrix(&traj, &c.degrees()).unwrap();
        assert!(m.as_slice().iter().all(|v| v.abs() < 1e-15));

        let traj = walk_trajectory(&k2(), &InitialDistribution::delta(2, 0).unwrap(), 1).unwrap();
        let m = distance_matrix(&traj, &[1, 1]).unwrap();
        assert_eq!(m[(0, 1)], SQRT_2);
        assert_eq!(m[(1, 0)], SQRT_2);
        assert_eq!(m[(0, 0)], 0.0);
        assert_eq!(distance_matrix(&traj, &[1, 0]), Err(Error::IsolatedNode(1)));
    }

    #[test]
    fn similarity_examples() {
        let traj = walk_trajectory(&k2(), &InitialDistribution::delta(2, 0).unwrap(), 2).unwrap();
        let s = similarity_matrix(&traj, &[1, 1]).unwrap();
        for t in 0..3 {
            assert_eq!(s[(t, t)], 1.0);
        }
        assert_eq!(s[(0, 1)], 0.0);
        assert_eq!(s[(0, 2)], 1.0);
    }

    #[test]
    fn walk_feature_examples() {
        let c = cycle(6);
        let f = walk_feature(&c, &uniform(6), 15, Metric::Distance).unwrap();
        assert_eq!(f.len(), 120);
        assert!(f.values().iter().all(|v| v.abs() < 1e-15));

        let f = walk_feature(&k2(), &InitialDistribution::delta(2, 0).unwrap(), 2, Metric::Distance)
            .unwrap();
        assert_eq!(f.values(), &[SQRT_2, 0.0, SQRT_2]);
        assert_eq!(feature_dim(15), 120);
    }

    #[test]
    fn delta_and_ego() {
        assert_eq!(InitialDistribution::delta(3, 0).unwrap().probs(), &[1.0, 0.0, 0.0]);
        assert_eq!(InitialDistribution::delta(3, 2).unwrap().probs(), &[0.0, 0.0, 1.0]);
        assert_eq!(InitialDistribution::delta(1, 0).unwrap().probs(), &[1.0]);
        assert!(InitialDistribution::delta(3, 3).is_err());

        let third = 1.0 / 3.0;
        assert_eq!(InitialDistribution::ego_uniform(&path3(), 1).unwrap().probs(), &[third; 3]);
        assert_eq!(InitialDistribution::ego_uniform(&star(5), 0).unwrap().probs(), &[0.2; 5]);
        assert_eq!(InitialDistribution::ego_uniform(&k2(), 1).unwrap().probs(), &[0.5, 0.5]);
        assert!(InitialDistribution::ego_uniform(&k2(), 2).is_err());
    }

    #[test]
    fn initial_distribution_validation() {
        assert!(InitialDistribution::new(vec![0.5, 0.4]).is_err());
        assert!(InitialDistribution::new(vec![1.5, -0.5]).is_err());
        assert!(InitialDistribution::new(vec![f64::NAN, 1.0]).is_err());
        assert!(InitialDistribution::new(vec![]).is_err());
    }

    #[test]
    fn landmarks_star() {
        let l = select_degree_landmarks(&star(5)).unwrap();
        assert_eq!(l.max, 0);
        assert!(l.min != 0 && l.median != 0);
    }

    #[test]
    fn landmarks_regular_graph_fall_back_to_node_zero() {
        let l = select_degree_landmarks(&cycle(7)).unwrap();
        assert_eq!(l.as_array(), [0, 0, 0, 0]);
        assert!(!l.unique);
    }

    #[test]
    fn batched_features_match_single_path() {
        let g = Graph::from_edge_list(
            7,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 0), (0, 3), (2, 5)],
        )
        .unwrap();
        for metric in [Metric::Distance, Metric::Similarity] {
            let batched = node_delta_features(&g, 6, metric).unwrap();
            for (i, f) in batched.iter().enumerate() {
                let p0 = InitialDistribution::delta(7, i).unwrap();
                assert_eq!(f, &walk_feature(&g, &p0, 6, metric).unwrap());
            }
        }
    }
}

//! Random forest for two-class problems.
//!
//! Trees are grown to purity on bootstrap samples with Gini splits over
//! `⌈√F⌉` sampled features per node. Tree `t` draws all of its randomness
//! from stream `t` of the forest seed, so trees can be trained in any order
//! and still come out identical.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::{Seed, Stream};

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    features: Vec<Vec<f64>>,
    labels: Vec<u8>,
}

impl LabeledDataset {
    pub fn new(features: Vec<Vec<f64>>, labels: Vec<u8>) -> Result<Self> {
        if features.len() != labels.len() {
            return Err(Error::SizeMismatch { expected: features.len(), found: labels.len() });
        }
        if let Some(first) = features.first() {
            let dim = first.len();
            if let Some(bad) = features.iter().find(|f| f.len() != dim) {
                return Err(Error::SizeMismatch { expected: dim, found: bad.len() });
            }
        }
        if labels.iter().any(|&l| l > 1) {
            return Err(Error::InvalidParameter("labels must be 0 or 1"));
        }
        if features.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(LabeledDataset { features, labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    pub fn features(&self) -> &[Vec<f64>] {
        &self.features
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }
}

/// Flat tree node. Leaves have `feature == None` and carry class counts;
/// internal nodes send `x[feature] <= threshold` to `left`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TreeNode {
    pub feature: Option<usize>,
    pub threshold: f64,
    pub left: usize,
    pub right: usize,
    pub counts: [u32; 2],
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tree {
    pub nodes: Vec<TreeNode>,
}

impl Tree {
    fn leaf_for(&self, x: &[f64]) -> &TreeNode {
        let mut node = &self.nodes[0];
        while let Some(f) = node.feature {
            node = if x[f] <= node.threshold { &self.nodes[node.left] } else { &self.nodes[node.right] };
        }
        node
    }

    /// Majority class of the reached leaf; ties vote 0.5.
    pub fn vote(&self, x: &[f64]) -> f64 {
        let [c0, c1] = self.leaf_for(x).counts;
        match c1.cmp(&c0) {
            core::cmp::Ordering::Greater => 1.0,
            core::cmp::Ordering::Less => 0.0,
            core::cmp::Ordering::Equal => 0.5,
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(t: &Tree, i: usize) -> usize {
            match t.nodes[i].feature {
                None => 0,
                Some(_) => 1 + walk(t, t.nodes[i].left).max(walk(t, t.nodes[i].right)),
            }
        }
        walk(self, 0)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Forest {
    pub trees: Vec<Tree>,
    pub dim: usize,
    pub seed: Seed,
}

impl Forest {
    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    /// Fraction of trees voting for class 1.
    pub fn predict_score(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::SizeMismatch { expected: self.dim, found: x.len() });
        }
        let votes: f64 = self.trees.iter().map(|t| t.vote(x)).sum();
        Ok(votes / self.trees.len() as f64)
    }
}

pub fn train_forest(data: &LabeledDataset, n_trees: usize, seed: Seed) -> Result<Forest> {
    if n_trees == 0 {
        return Err(Error::InvalidParameter("forest needs at least one tree"));
    }
    check_both_classes(data)?;
    let trees = (0..n_trees).map(|t| train_tree(data, seed, t)).collect();
    Ok(Forest { trees, dim: data.dim(), seed })
}

pub(crate) fn check_both_classes(data: &LabeledDataset) -> Result<()> {
    let ones = data.labels.iter().filter(|&&l| l == 1).count();
    if ones == 0 || ones == data.len() {
        return Err(Error::SingleClass);
    }
    Ok(())
}

/// Grows tree `index` of the forest seeded by `seed`.
pub fn train_tree(data: &LabeledDataset, seed: Seed, index: usize) -> Tree {
    let mut rng = Stream::new(seed, index as u64);
    let n = data.len();
    let sample: Vec<usize> = (0..n).map(|_| rng.below(n)).collect();
    let dim = data.dim();
    let mtry = ceil_sqrt(dim).max(1);

    let mut nodes: Vec<TreeNode> = Vec::new();
    nodes.push(leaf(data, &sample));
    let mut pending = vec![(0usize, sample)];
    let mut scratch: Vec<(f64, u8)> = Vec::with_capacity(n);
    while let Some((id, members)) = pending.pop() {
        let counts = nodes[id].counts;
        if members.len() < 2 || counts[0] == 0 || counts[1] == 0 {
            continue;
        }
        let Some(split) = best_split(data, &members, dim, mtry, &mut rng, &mut scratch) else {
            continue;
        };
        let (left, right): (Vec<usize>, Vec<usize>) = members
            .iter()
            .partition(|&&i| data.features[i][split.feature] <= split.threshold);
        let left_id = nodes.len();
        nodes.push(leaf(data, &left));
        let right_id = nodes.len();
        nodes.push(leaf(data, &right));
        let node = &mut nodes[id];
        node.feature = Some(split.feature);
        node.threshold = split.threshold;
        node.left = left_id;
        node.right = right_id;
        pending.push((right_id, right));
        pending.push((left_id, left));
    }
    Tree { nodes }
}

fn leaf(data: &LabeledDataset, members: &[usize]) -> TreeNode {
    let mut counts = [0u32; 2];
    for &i in members {
        counts[data.labels[i] as usize] += 1;
    }
    TreeNode { feature: None, threshold: 0.0, left: 0, right: 0, counts }
}

fn ceil_sqrt(x: usize) -> usize {
    let mut r = libm::sqrt(x as f64) as usize;
    while r * r < x {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= x {
        r -= 1;
    }
    r
}

struct Split {
    feature: usize,
    threshold: f64,
    /// Weighted child impurity `Σ n_c · gini_c`; lower is better.
    cost: f64,
}

fn better(candidate: &Split, best: &Option<Split>) -> bool {
    match best {
        None => true,
        Some(b) => {
            candidate.cost < b.cost
                || (candidate.cost == b.cost
                    && (candidate.feature, candidate.threshold) < (b.feature, b.threshold))
        }
    }
}

/// Best Gini split over `mtry` sampled features. When every sampled
/// feature is constant on `members`, the remaining features are tried in
/// random order until one admits a split.
fn best_split(
    data: &LabeledDataset,
    members: &[usize],
    dim: usize,
    mtry: usize,
    rng: &mut Stream,
    scratch: &mut Vec<(f64, u8)>,
) -> Option<Split> {
    let order = rng.permutation(dim);
    let mut best: Option<Split> = None;
    for (tried, &feature) in order.iter().enumerate() {
        if tried >= mtry && best.is_some() {
            break;
        }
        scratch.clear();
        scratch.extend(members.iter().map(|&i| (data.features[i][feature], data.labels[i])));
        scratch.sort_by(|a, b| a.0.total_cmp(&b.0));
        let total = scratch.len() as f64;
        let ones_total = scratch.iter().filter(|s| s.1 == 1).count() as f64;
        let mut ones_left = 0.0;
        for k in 0..scratch.len() - 1 {
            ones_left += f64::from(scratch[k].1);
            if scratch[k].0 == scratch[k + 1].0 {
                continue;
            }
            let nl = (k + 1) as f64;
            let nr = total - nl;
            let ones_right = ones_total - ones_left;
            let zeros_left = nl - ones_left;
            let zeros_right = nr - ones_right;
            let cost = nl - (ones_left * ones_left + zeros_left * zeros_left) / nl + nr
                - (ones_right * ones_right + zeros_right * zeros_right) / nr;
            let threshold = 0.5 * (scratch[k].0 + scratch[k + 1].0);
            // midpoint may round up onto the right value for adjacent floats
            let threshold = if threshold >= scratch[k + 1].0 { scratch[k].0 } else { threshold };
            let candidate = Split { feature, threshold, cost };
            if better(&candidate, &best) {
                best = Some(candidate);
            }
        }
    }
    best
}

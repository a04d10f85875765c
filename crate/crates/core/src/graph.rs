//! Undirected simple graphs in compressed adjacency form.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub const PAGERANK_DAMPING: f64 = 0.85;
pub const PAGERANK_TOL: f64 = 1e-12;
pub const PAGERANK_MAX_ITER: usize = 1000;

/// Graphs whose adjacency bit matrix fits in this many words (32 MiB)
/// count triangles with popcounts instead of sorted-list merges.
const TRIANGLE_BITSET_WORDS: usize = 1 << 22;

/// Undirected simple graph. Neighbor lists are sorted ascending and the
/// structure is immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl Graph {
    /// Builds a graph from an undirected edge list. Duplicate pairs (in
    /// either orientation) collapse to one edge.
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > u32::MAX as usize {
            return Err(Error::InvalidParameter("node count exceeds u32 range"));
        }
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(i, j) in edges {
            for node in [i, j] {
                if node >= n {
                    return Err(Error::NodeOutOfRange { node, n });
                }
            }
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            lists[i].push(j as u32);
            lists[j].push(i as u32);
        }
        for list in &mut lists {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self::from_sorted_lists(lists))
    }

    /// Builds from per-node neighbor lists that are already sorted,
    /// deduplicated and symmetric.
    pub(crate) fn from_sorted_lists(lists: Vec<Vec<u32>>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        offsets.push(0);
        let total: usize = lists.iter().map(Vec::len).sum();
        let mut neighbors = Vec::with_capacity(total);
        for list in lists {
            neighbors.extend_from_slice(&list);
            offsets.push(neighbors.len());
        }
        Graph { offsets, neighbors }
    }

    /// Builds from a strict upper-triangle edge mask enumerated in
    /// lexicographic pair order.
    pub(crate) fn from_pair_mask(n: usize, mut has_edge: impl FnMut(usize, usize) -> bool) -> Self {
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
        for i in 0..n {
            for j in (i + 1)..n {
                if has_edge(i, j) {
                    lists[i].push(j as u32);
                    lists[j].push(i as u32);
                }
            }
        }
        // Pushes arrive in increasing order for both endpoints.
        Self::from_sorted_lists(lists)
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    #[inline]
    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.neighbors(i).binary_search(&(j as u32)).is_ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|i| self.degree(i)).collect()
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |i| {
            self.neighbors(i)
                .iter()
                .map(|&j| j as usize)
                .filter(move |&j| j > i)
                .map(move |j| (i, j))
        })
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n()).map(|i| self.degree(i)).min().unwrap_or(0)
    }

    /// First isolated node, if any.
    pub fn isolated_node(&self) -> Option<usize> {
        (0..self.n()).find(|&i| self.degree(i) == 0)
    }

    pub(crate) fn require_min_degree(&self) -> Result<()> {
        match self.isolated_node() {
            Some(i) => Err(Error::IsolatedNode(i)),
            None => Ok(()),
        }
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        bfs_distances(self, 0).iter().all(|&d| d != usize::MAX)
    }

    /// Relabels node `i` as `perm.apply(i)`.
    pub fn permute(&self, perm: &Permutation) -> Result<Graph> {
        let n = self.n();
        if perm.len() != n {
            return Err(Error::SizeMismatch { expected: n, found: perm.len() });
        }
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
        for i in 0..n {
            let pi = perm.apply(i);
            let list = &mut lists[pi];
            list.extend(self.neighbors(i).iter().map(|&j| perm.apply(j as usize) as u32));
            list.sort_unstable();
        }
        Ok(Self::from_sorted_lists(lists))
    }

    /// PageRank by power iteration on the damped degree-normalized walk.
    /// Stops once the L1 change between iterates is at most `tol`.
    pub fn pagerank(&self, damping: f64, tol: f64, max_iter: usize) -> Result<Vec<f64>> {
        self.require_min_degree()?;
        if !(0.0..=1.0).contains(&damping) {
            return Err(Error::InvalidParameter("damping must lie in [0, 1]"));
        }
        let n = self.n();
        if n == 0 {
            return Err(Error::Empty);
        }
        let inv_deg: Vec<f64> = (0..n).map(|i| 1.0 / self.degree(i) as f64).collect();
        let teleport = (1.0 - damping) / n as f64;
        let mut rank = vec![1.0 / n as f64; n];
        let mut scaled = vec![0.0; n];
        let mut next = vec![0.0; n];
        for _ in 0..max_iter {
            for i in 0..n {
                scaled[i] = rank[i] * inv_deg[i];
            }
            let mut change = 0.0;
            for j in 0..n {
                let mut acc = 0.0;
                for &i in self.neighbors(j) {
                    acc += scaled[i as usize];
                }
                next[j] = teleport + damping * acc;
                change += (next[j] - rank[j]).abs();
            }
            core::mem::swap(&mut rank, &mut next);
            if change <= tol {
                return Ok(rank);
            }
        }
        Err(Error::NotConverged { iterations: max_iter })
    }

    /// PageRank with the fixed toolkit settings (0.85, 1e-12, 1000).
    pub fn default_pagerank(&self) -> Result<Vec<f64>> {
        self.pagerank(PAGERANK_DAMPING, PAGERANK_TOL, PAGERANK_MAX_ITER)
    }

    /// Number of edges among the neighbors of each node.
    pub fn triangle_counts(&self) -> Vec<usize> {
        let n = self.n();
        let words = n.div_ceil(64);
        if n * words <= TRIANGLE_BITSET_WORDS {
            self.triangle_counts_bitset(words)
        } else {
            self.triangle_counts_merge()
        }
    }

    /// `t_i = ½ Σ_{j ∈ N(i)} |N(i) ∩ N(j)|`, with each intersection a
    /// popcount over adjacency bit rows.
    fn triangle_counts_bitset(&self, words: usize) -> Vec<usize> {
        let n = self.n();
        let mut rows = vec![0u64; n * words];
        for i in 0..n {
            let row = &mut rows[i * words..(i + 1) * words];
            for &j in self.neighbors(i) {
                row[j as usize / 64] |= 1 << (j % 64);
            }
        }
        let mut twice = vec![0usize; n];
        for i in 0..n {
            let ri = &rows[i * words..(i + 1) * words];
            for &j in self.neighbors(i).iter().filter(|&&j| j as usize > i) {
                let j = j as usize;
                let rj = &rows[j * words..(j + 1) * words];
                let common: u32 = ri.iter().zip(rj).map(|(a, b)| (a & b).count_ones()).sum();
                twice[i] += common as usize;
                twice[j] += common as usize;
            }
        }
        twice.into_iter().map(|t| t / 2).collect()
    }

    fn triangle_counts_merge(&self) -> Vec<usize> {
        let n = self.n();
        let mut counts = vec![0usize; n];
        for i in 0..n {
            let ni = self.neighbors(i);
            for &j in ni.iter().filter(|&&j| j as usize > i) {
                let j = j as usize;
                // common neighbors k > j close the triangle i < j < k once
                let nj = self.neighbors(j);
                let (mut a, mut b) = (0, 0);
                while a < ni.len() && b < nj.len() {
                    match ni[a].cmp(&nj[b]) {
                        core::cmp::Ordering::Less => a += 1,
                        core::cmp::Ordering::Greater => b += 1,
                        core::cmp::Ordering::Equal => {
                            let k = ni[a] as usize;
                            if k > j {
                                counts[i] += 1;
                                counts[j] += 1;
                                counts[k] += 1;
                            }
                            a += 1;
                            b += 1;
                        }
                    }
                }
            }
        }
        counts
    }

    /// Local clustering from precomputed triangle counts.
    pub fn clustering_from_triangles(&self, triangles: &[usize]) -> Vec<f64> {
        triangles
            .iter()
            .enumerate()
            .map(|(i, &tri)| {
                let d = self.degree(i);
                if d < 2 {
                    0.0
                } else {
                    2.0 * tri as f64 / (d * (d - 1)) as f64
                }
            })
            .collect()
    }

    pub fn clustering_coefficients(&self) -> Vec<f64> {
        self.clustering_from_triangles(&self.triangle_counts())
    }
}

/// Hop distances from `source`; unreachable nodes get `usize::MAX`.
pub fn bfs_distances(g: &Graph, source: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            let w = w as usize;
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// A bijection on `[0, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &target in &mapping {
            if target >= n {
                return Err(Error::NodeOutOfRange { node: target, n });
            }
            if seen[target] {
                return Err(Error::InvalidParameter("permutation is not a bijection"));
            }
            seen[target] = true;
        }
        Ok(Permutation { mapping })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { mapping: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.mapping[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.mapping
    }

    /// `out[π(i)] = values[i]`, i.e. the vector `Π v`.
    pub fn permute_vector<T: Copy + Default>(&self, values: &[T]) -> Result<Vec<T>> {
        if values.len() != self.len() {
            return Err(Error::SizeMismatch { expected: self.len(), found: values.len() });
        }
        let mut out = vec![T::default(); values.len()];
        for (i, &v) in values.iter().enumerate() {
            out[self.mapping[i]] = v;
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &t) in self.mapping.iter().enumerate() {
            inv[t] = i;
        }
        Permutation { mapping: inv }
    }
}

//! Brute-force reference implementations used only by tests.
#![allow(dead_code)]

use walk2vec_core::Graph;

/// Dense row-stochastic transition matrix.
pub fn dense_transition(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.n();
    (0..n)
        .map(|i| {
            let row: Vec<f64> = (0..n).map(|j| if g.has_edge(i, j) { 1.0 } else { 0.0 }).collect();
            let d: f64 = row.iter().sum();
            row.into_iter().map(|a| a / d).collect()
        })
        .collect()
}

/// `p_t = Wᵀ p_{t−1}` by full dense matrix-vector products.
pub fn dense_trajectory(g: &Graph, p0: &[f64], tau: usize) -> Vec<Vec<f64>> {
    let w = dense_transition(g);
    let n = g.n();
    let mut steps = vec![p0.to_vec()];
    for _ in 0..tau {
        let prev = steps.last().unwrap();
        let next: Vec<f64> = (0..n).map(|j| (0..n).map(|i| w[i][j] * prev[i]).sum()).collect();
        steps.push(next);
    }
    steps
}

/// `‖D^{-1/2}(p_s − p_t)‖₂` for every pair, via an explicit diagonal matrix.
pub fn dense_distance(g: &Graph, steps: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = g.n();
    let d_half: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 / (g.degree(i) as f64).sqrt() } else { 0.0 }).collect())
        .collect();
    let k = steps.len();
    let mut m = vec![vec![0.0; k]; k];
    for s in 0..k {
        for t in 0..k {
            let diff: Vec<f64> = (0..n).map(|i| steps[s][i] - steps[t][i]).collect();
            let y: Vec<f64> = (0..n).map(|i| (0..n).map(|j| d_half[i][j] * diff[j]).sum()).collect();
            m[s][t] = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        }
    }
    m
}

/// Cosine similarity under `⟨a, b⟩ = aᵀ D⁻¹ b`, clamped to `[0, 1]`.
pub fn dense_similarity(g: &Graph, steps: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = g.n();
    let ip = |a: &[f64], b: &[f64]| (0..n).map(|i| a[i] * b[i] / g.degree(i) as f64).sum::<f64>();
    let k = steps.len();
    let mut m = vec![vec![0.0; k]; k];
    for s in 0..k {
        for t in 0..k {
            let c = ip(&steps[s], &steps[t]) / (ip(&steps[s], &steps[s]) * ip(&steps[t], &steps[t])).sqrt();
            m[s][t] = c.clamp(0.0, 1.0);
        }
    }
    m
}

fn all_shortest_paths(g: &Graph, s: usize, t: usize) -> Vec<Vec<usize>> {
    let dist = walk2vec_core::graph::bfs_distances(g, t);
    if dist[s] == usize::MAX {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut path = vec![s];
    fn extend(g: &Graph, dist: &[usize], t: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let v = *path.last().unwrap();
        if v == t {
            out.push(path.clone());
            return;
        }
        for &w in g.neighbors(v) {
            let w = w as usize;
            if dist[w] + 1 == dist[v] {
                path.push(w);
                extend(g, dist, t, path, out);
                path.pop();
            }
        }
    }
    extend(g, &dist, t, &mut path, &mut out);
    out
}

/// Betweenness by enumerating every shortest path of every unordered pair.
pub fn brute_betweenness(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let mut b = vec![0.0; n];
    for s in 0..n {
        for t in (s + 1)..n {
            let paths = all_shortest_paths(g, s, t);
            if paths.is_empty() {
                continue;
            }
            for v in 0..n {
                if v == s || v == t {
                    continue;
                }
                let through = paths.iter().filter(|p| p.contains(&v)).count();
                b[v] += through as f64 / paths.len() as f64;
            }
        }
    }
    b
}

/// AUC by counting every (positive, negative) pair; ties count half.
pub fn brute_auc(scores: &[f64], labels: &[u8]) -> f64 {
    let mut twice_wins: u128 = 0;
    let (mut pos, mut neg) = (0u128, 0u128);
    for (i, &li) in labels.iter().enumerate() {
        if li == 1 {
            pos += 1;
        } else {
            neg += 1;
        }
        for (j, &lj) in labels.iter().enumerate() {
            if li == 1 && lj == 0 {
                if scores[i] > scores[j] {
                    twice_wins += 2;
                } else if scores[i] == scores[j] {
                    twice_wins += 1;
                }
            }
        }
    }
    twice_wins as f64 / (2.0 * pos as f64 * neg as f64)
}

/// Connectivity via repeated squaring of the reachability relation.
pub fn transitive_closure_connected(g: &Graph) -> bool {
    let n = g.n();
    let mut r: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j || g.has_edge(i, j)).collect()).collect();
    let mut span = 1;
    while span < n {
        let next: Vec<Vec<bool>> =
            (0..n).map(|i| (0..n).map(|j| (0..n).any(|k| r[i][k] && r[k][j])).collect()).collect();
        r = next;
        span *= 2;
    }
    r.iter().all(|row| row.iter().all(|&x| x))
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Random LASSO problem; odd seeds use strongly correlated atoms.
pub fn random_lasso_instance(seed: u64) -> (walk2vec_core::Dictionary, Vec<f64>) {
    use walk2vec_core::rng::Stream;
    let mut rng = Stream::new(walk2vec_core::Seed(seed), 21);
    let dim = 4 + rng.below(20);
    let atoms = 2 + rng.below(20);
    let base: Vec<f64> = (0..dim).map(|_| rng.uniform() - 0.5).collect();
    let mut cols = Vec::with_capacity(dim * atoms);
    for _ in 0..atoms {
        let mut c: Vec<f64> = (0..dim)
            .map(|i| if seed % 2 == 1 { base[i] + 0.1 * (rng.uniform() - 0.5) } else { rng.uniform() - 0.5 })
            .collect();
        let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
        c.iter_mut().for_each(|v| *v /= norm);
        cols.extend(c);
    }
    let lambda1 = 0.01 + 0.4 * rng.uniform();
    let scale = 0.5 + 3.0 * rng.uniform();
    let x: Vec<f64> = (0..dim).map(|_| scale * (rng.uniform() - 0.5)).collect();
    (walk2vec_core::Dictionary::from_columns(dim, atoms, lambda1, cols).unwrap(), x)
}

/// Best objective among `count` random candidates: half are perturbations
/// of `code` at random scales, half are random sparse vectors.
pub fn random_search_best(dict: &walk2vec_core::Dictionary, x: &[f64], code: &[f64], seed: u64, count: usize) -> f64 {
    use walk2vec_core::rng::Stream;
    use walk2vec_core::sparse::lasso_objective;
    let mut rng = Stream::new(walk2vec_core::Seed(seed), 22);
    let k = dict.atoms();
    let mut best = f64::INFINITY;
    for c in 0..count {
        let cand: Vec<f64> = if c % 2 == 0 {
            let scale = 10f64.powf(-7.0 * rng.uniform());
            code.iter()
                .map(|&y| if rng.bernoulli(0.1) { 0.0 } else { y + scale * (rng.uniform() - 0.5) })
                .collect()
        } else {
            (0..k).map(|_| if rng.bernoulli(0.3) { 4.0 * (rng.uniform() - 0.5) } else { 0.0 }).collect()
        };
        best = best.min(lasso_objective(dict, x, &cand));
    }
    best
}

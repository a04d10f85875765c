//! Sparse coding of walk features: LASSO codes against a learned
//! dictionary, online dictionary learning and order-free pooling.

use alloc::vec;
use alloc::vec::Vec;

use crate::embed::{EmbeddingMethod, GraphEmbedding};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{dot, norm2};
use crate::rng::{streams, Seed, Stream};
use crate::walk::{feature_dim, node_delta_features, Metric};

pub const DEFAULT_ATOMS: usize = 100;
pub const DEFAULT_LAMBDA1: f64 = 0.15;

const ATOM_NORM_TOL: f64 = 1e-9;
const CD_TOL: f64 = 1e-8;
const CD_MAX_SWEEPS: usize = 10_000;
const KKT_TARGET: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum PoolingMode {
    #[default]
    Average,
    Max,
}

/// `d × K` matrix of atoms stored column by column, plus the LASSO weight
/// used to code against it.
#[derive(Debug, Clone, PartialEq)]
pub struct Dictionary {
    dim: usize,
    atoms: usize,
    lambda1: f64,
    data: Vec<f64>,
    gram: Vec<f64>,
}

impl Dictionary {
    /// `columns` holds `atoms` consecutive columns of length `dim`.
    pub fn from_columns(dim: usize, atoms: usize, lambda1: f64, columns: Vec<f64>) -> Result<Self> {
        if atoms == 0 || dim == 0 {
            return Err(Error::Empty);
        }
        if columns.len() != dim * atoms {
            return Err(Error::SizeMismatch { expected: dim * atoms, found: columns.len() });
        }
        if columns.iter().any(|v| !v.is_finite()) || !lambda1.is_finite() {
            return Err(Error::NonFinite);
        }
        if lambda1 < 0.0 {
            return Err(Error::InvalidParameter("lambda1 must be nonnegative"));
        }
        if columns.chunks_exact(dim).any(|c| norm2(c) > 1.0 + ATOM_NORM_TOL) {
            return Err(Error::InvalidParameter("atom norm exceeds 1"));
        }
        let gram = gram_of(dim, atoms, &columns);
        Ok(Dictionary { dim, atoms, lambda1, data: columns, gram })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn atom(&self, j: usize) -> &[f64] {
        &self.data[j * self.dim..(j + 1) * self.dim]
    }

    pub fn columns(&self) -> &[f64] {
        &self.data
    }

    /// `D y`.
    pub fn reconstruct(&self, code: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (j, &y) in code.iter().enumerate() {
            if y != 0.0 {
                for (o, a) in out.iter_mut().zip(self.atom(j)) {
                    *o += a * y;
                }
            }
        }
        out
    }
}

fn gram_of(dim: usize, atoms: usize, data: &[f64]) -> Vec<f64> {
    let mut gram = vec![0.0; atoms * atoms];
    for i in 0..atoms {
        for j in i..atoms {
            let v = dot(&data[i * dim..(i + 1) * dim], &data[j * dim..(j + 1) * dim]);
            gram[i * atoms + j] = v;
            gram[j * atoms + i] = v;
        }
    }
    gram
}

/// `½‖D y − x‖² + λ₁‖y‖₁`.
pub fn lasso_objective(dict: &Dictionary, x: &[f64], code: &[f64]) -> f64 {
    let recon = dict.reconstruct(code);
    let resid: f64 = recon.iter().zip(x).map(|(r, v)| (r - v) * (r - v)).sum();
    0.5 * resid + dict.lambda1 * code.iter().map(|v| v.abs()).sum::<f64>()
}

#[inline]
fn soft_threshold(v: f64, t: f64) -> f64 {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        0.0
    }
}

/// LASSO code of `x`.
///
/// The LARS homotopy path is followed from `y = 0` down to `λ₁`, which
/// lands on the solution in a handful of active-set steps even when atoms
/// are strongly correlated. Cyclic coordinate descent then polishes the
/// result until no coordinate moves by more than 1e-8 and the recomputed
/// gradient meets the stationarity conditions to 1e-8 (at most 10 000
/// sweeps).
pub fn lasso(dict: &Dictionary, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != dict.dim {
        return Err(Error::SizeMismatch { expected: dict.dim, found: x.len() });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let k = dict.atoms;
    let corr: Vec<f64> = (0..k).map(|j| dot(dict.atom(j), x)).collect();
    let mut code = lars_path(&dict.gram, &corr, dict.lambda1);
    coordinate_descent(&dict.gram, &corr, dict.lambda1, &mut code);
    Ok(code)
}

/// Gradient of the smooth part, `G y − c`.
fn smooth_gradient(gram: &[f64], corr: &[f64], code: &[f64]) -> Vec<f64> {
    let k = corr.len();
    (0..k).map(|j| dot(&gram[j * k..(j + 1) * k], code) - corr[j]).collect()
}

fn coordinate_descent(gram: &[f64], corr: &[f64], lambda: f64, code: &mut [f64]) {
    let k = corr.len();
    let mut grad = smooth_gradient(gram, corr, code);
    if kkt_violation(&grad, code, lambda) <= KKT_TARGET {
        return;
    }
    for _ in 0..CD_MAX_SWEEPS {
        let mut max_change: f64 = 0.0;
        for j in 0..k {
            let gjj = gram[j * k + j];
            if gjj <= 0.0 {
                continue;
            }
            let old = code[j];
            let rho = gjj * old - grad[j];
            let new = soft_threshold(rho, lambda) / gjj;
            let delta = new - old;
            if delta != 0.0 {
                code[j] = new;
                let col = &gram[j * k..(j + 1) * k];
                for (g, &gv) in grad.iter_mut().zip(col) {
                    *g += gv * delta;
                }
                max_change = max_change.max(delta.abs());
            }
        }
        if max_change <= CD_TOL {
            // refresh to shed accumulated rounding before the final check
            grad = smooth_gradient(gram, corr, code);
            if kkt_violation(&grad, code, lambda) <= KKT_TARGET {
                break;
            }
        }
    }
}

/// Solves `M w = rhs` for symmetric positive definite `M` (row-major,
/// `m × m`) by Cholesky. Returns `None` when a pivot collapses.
fn cholesky_solve(mat: &[f64], rhs: &[f64]) -> Option<Vec<f64>> {
    let m = rhs.len();
    let mut l = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..=i {
            let mut s = mat[i * m + j];
            for p in 0..j {
                s -= l[i * m + p] * l[j * m + p];
            }
            if i == j {
                if s <= 1e-12 {
                    return None;
                }
                l[i * m + i] = libm::sqrt(s);
            } else {
                l[i * m + j] = s / l[j * m + j];
            }
        }
    }
    let mut z = vec![0.0; m];
    for i in 0..m {
        let mut s = rhs[i];
        for p in 0..i {
            s -= l[i * m + p] * z[p];
        }
        z[i] = s / l[i * m + i];
    }
    for i in (0..m).rev() {
        let mut s = z[i];
        for p in (i + 1)..m {
            s -= l[p * m + i] * z[p];
        }
        z[i] = s / l[i * m + i];
    }
    Some(z)
}

/// LARS with the lasso modification, run on the Gram form until the
/// common active correlation falls to `lambda`.
fn lars_path(gram: &[f64], corr0: &[f64], lambda: f64) -> Vec<f64> {
    const EPS: f64 = 1e-14;
    let k = corr0.len();
    let mut code = vec![0.0; k];
    let mut corr = corr0.to_vec();
    let mut active: Vec<usize> = Vec::new();
    let mut excluded = vec![false; k];
    let mut in_active = vec![false; k];

    let Some((first, c_max)) = corr
        .iter()
        .map(|c| c.abs())
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (j, v)| match best {
            Some((_, b)) if b >= v => best,
            _ => Some((j, v)),
        })
    else {
        return code;
    };
    let mut c_level = c_max;
    if c_level <= lambda {
        return code;
    }
    let mut pending = Some(first);

    for _ in 0..(4 * k + 8) {
        if let Some(j) = pending.take() {
            active.push(j);
            in_active[j] = true;
        }
        let m = active.len();
        let mut sub = vec![0.0; m * m];
        for (r, &i) in active.iter().enumerate() {
            for (c, &j) in active.iter().enumerate() {
                sub[r * m + c] = gram[i * k + j];
            }
        }
        let signs: Vec<f64> = active.iter().map(|&i| if corr[i] >= 0.0 { 1.0 } else { -1.0 }).collect();
        let Some(dir) = cholesky_solve(&sub, &signs) else {
            // newest atom is (numerically) spanned by the others
            let j = active.pop().unwrap();
            in_active[j] = false;
            excluded[j] = true;
            if active.is_empty() {
                break;
            }
            continue;
        };
        // rate of change of every correlation along the direction
        let rate: Vec<f64> = (0..k)
            .map(|j| active.iter().zip(&dir).map(|(&i, &w)| gram[j * k + i] * w).sum())
            .collect();

        let mut gamma = c_level - lambda;
        let mut event: Option<(usize, bool)> = None; // (index, is_drop)
        for j in 0..k {
            if in_active[j] || excluded[j] {
                continue;
            }
            for (num, den) in [(c_level - corr[j], 1.0 - rate[j]), (c_level + corr[j], 1.0 + rate[j])] {
                if den > EPS {
                    let g = num / den;
                    if g > EPS && g < gamma {
                        gamma = g;
                        event = Some((j, false));
                    }
                }
            }
        }
        for (pos, &i) in active.iter().enumerate() {
            let w = dir[pos];
            if w != 0.0 {
                let g = -code[i] / w;
                if g > EPS && g < gamma {
                    gamma = g;
                    event = Some((i, true));
                }
            }
        }

        for (pos, &i) in active.iter().enumerate() {
            code[i] += gamma * dir[pos];
        }
        for j in 0..k {
            corr[j] -= gamma * rate[j];
        }
        c_level -= gamma;

        match event {
            None => break,
            Some((j, true)) => {
                code[j] = 0.0;
                in_active[j] = false;
                active.retain(|&i| i != j);
                if active.is_empty() {
                    break;
                }
            }
            Some((j, false)) => pending = Some(j),
        }
    }
    code
}

fn kkt_violation(grad: &[f64], code: &[f64], lambda: f64) -> f64 {
    grad.iter()
        .zip(code)
        .map(|(&g, &y)| {
            if y > 0.0 {
                (g + lambda).abs()
            } else if y < 0.0 {
                (g - lambda).abs()
            } else {
                (g.abs() - lambda).max(0.0)
            }
        })
        .fold(0.0, f64::max)
}

/// Largest violation of the LASSO optimality conditions, computed from
/// scratch as `Dᵀ(D y − x)`.
pub fn lasso_kkt_residual(dict: &Dictionary, x: &[f64], code: &[f64]) -> f64 {
    let recon = dict.reconstruct(code);
    let resid: Vec<f64> = recon.iter().zip(x).map(|(r, v)| r - v).collect();
    let grad: Vec<f64> = (0..dict.atoms).map(|j| dot(dict.atom(j), &resid)).collect();
    kkt_violation(&grad, code, dict.lambda1)
}

/// Settings for online dictionary learning.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DictLearnConfig {
    pub atoms: usize,
    pub lambda1: f64,
    pub epochs: usize,
    pub batch_size: usize,
}

impl Default for DictLearnConfig {
    fn default() -> Self {
        DictLearnConfig { atoms: DEFAULT_ATOMS, lambda1: DEFAULT_LAMBDA1, epochs: 5, batch_size: 256 }
    }
}

/// Learned dictionary and the mean held-out LASSO objective after each
/// epoch (entry 0 is the initial dictionary).
#[derive(Debug, Clone)]
pub struct DictLearnOutcome {
    pub dictionary: Dictionary,
    pub heldout_objective: Vec<f64>,
}

pub fn dict_learn(features: &[&[f64]], config: &DictLearnConfig, seed: Seed) -> Result<Dictionary> {
    dict_learn_with_history(features, config, seed).map(|o| o.dictionary)
}

/// Online dictionary learning with mini-batches.
///
/// Each batch is sparse coded against the current dictionary, the
/// sufficient statistics `A = Σ y yᵀ` and `B = Σ x yᵀ` are updated with the
/// mini-batch forgetting weight, and one pass of block coordinate descent
/// moves every atom, projecting it back into the unit ball. Ten percent of
/// the features (chosen by seed) are held out to track the objective.
pub fn dict_learn_with_history(
    features: &[&[f64]],
    config: &DictLearnConfig,
    seed: Seed,
) -> Result<DictLearnOutcome> {
    let first = features.first().ok_or(Error::Empty)?;
    let dim = first.len();
    if dim == 0 {
        return Err(Error::Empty);
    }
    for f in features {
        if f.len() != dim {
            return Err(Error::SizeMismatch { expected: dim, found: f.len() });
        }
        if f.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
    }
    if config.atoms == 0 || config.batch_size == 0 {
        return Err(Error::InvalidParameter("atoms and batch size must be positive"));
    }
    let k = config.atoms;
    let lambda = config.lambda1;

    let mut order = Stream::new(seed, streams::SUBSAMPLE).permutation(features.len());
    let held = features.len() / 10;
    let heldout: Vec<usize> = order.drain(..held).collect();
    let train = order;
    let heldout = if heldout.is_empty() { train.clone() } else { heldout };

    // initial atoms: distinct training features, normalized
    let mut init = Stream::new(seed, streams::DICT_INIT);
    let picks = init.sample_indices(train.len(), k);
    let mut data = Vec::with_capacity(dim * k);
    for slot in 0..k {
        let mut atom: Vec<f64> = match picks.get(slot) {
            Some(&p) => features[train[p]].to_vec(),
            None => Vec::new(),
        };
        let mut norm = norm2(&atom);
        while atom.is_empty() || norm == 0.0 {
            atom = (0..dim).map(|_| 2.0 * init.uniform() - 1.0).collect();
            norm = norm2(&atom);
        }
        atom.iter_mut().for_each(|v| *v /= norm);
        data.extend_from_slice(&atom);
    }
    let mut dict = Dictionary::from_columns(dim, k, lambda, data)?;

    let heldout_objective = |d: &Dictionary| -> Result<f64> {
        let mut total = 0.0;
        for &i in &heldout {
            let code = lasso(d, features[i])?;
            total += lasso_objective(d, features[i], &code);
        }
        Ok(total / heldout.len() as f64)
    };
    let mut history = vec![heldout_objective(&dict)?];

    let mut a_stat = vec![0.0; k * k];
    let mut b_stat = vec![0.0; dim * k];
    let mut batches = Stream::new(seed, streams::DICT_BATCHES);
    let mut t = 0usize;
    let eta = config.batch_size as f64;
    for _epoch in 0..config.epochs {
        let mut epoch_order = train.clone();
        batches.shuffle(&mut epoch_order);
        for batch in epoch_order.chunks(config.batch_size) {
            t += 1;
            let tf = t as f64;
            let theta = if tf < eta { tf * eta } else { eta * eta + tf - eta };
            let beta = (theta + 1.0 - eta) / (theta + 1.0);
            a_stat.iter_mut().for_each(|v| *v *= beta);
            b_stat.iter_mut().for_each(|v| *v *= beta);
            for &i in batch {
                let x = features[i];
                let code = lasso(&dict, x)?;
                for (p, &yp) in code.iter().enumerate() {
                    if yp == 0.0 {
                        continue;
                    }
                    for (q, &yq) in code.iter().enumerate() {
                        a_stat[p * k + q] += yp * yq;
                    }
                    for (b, &xv) in b_stat[p * dim..(p + 1) * dim].iter_mut().zip(x) {
                        *b += xv * yp;
                    }
                }
            }
            update_atoms(&mut dict.data, dim, k, &a_stat, &b_stat);
            dict.gram = gram_of(dim, k, &dict.data);
        }
        history.push(heldout_objective(&dict)?);
    }
    Ok(DictLearnOutcome { dictionary: dict, heldout_objective: history })
}

/// One block-coordinate pass: `u_j = (b_j − D a_j) / A_jj + d_j`, then
/// `d_j = u_j / max(‖u_j‖, 1)`.
fn update_atoms(data: &mut [f64], dim: usize, k: usize, a_stat: &[f64], b_stat: &[f64]) {
    let mut u = vec![0.0; dim];
    for j in 0..k {
        let ajj = a_stat[j * k + j];
        if ajj < 1e-12 {
            continue;
        }
        // D a_j with the current (partially updated) atoms
        u.iter_mut().for_each(|v| *v = 0.0);
        for (q, &aq) in a_stat[j * k..(j + 1) * k].iter().enumerate() {
            if aq != 0.0 {
                for (v, &dv) in u.iter_mut().zip(&data[q * dim..(q + 1) * dim]) {
                    *v += dv * aq;
                }
            }
        }
        let atom = &mut data[j * dim..(j + 1) * dim];
        for ((v, &b), &d) in u.iter_mut().zip(&b_stat[j * dim..(j + 1) * dim]).zip(atom.iter()) {
            *v = (b - *v) / ajj + d;
        }
        let scale = norm2(&u).max(1.0);
        for (d, &v) in atom.iter_mut().zip(&u) {
            *d = v / scale;
        }
    }
}

/// Componentwise mean or maximum over codes.
pub fn pool(codes: &[Vec<f64>], mode: PoolingMode) -> Result<Vec<f64>> {
    let first = codes.first().ok_or(Error::Empty)?;
    let k = first.len();
    if let Some(bad) = codes.iter().find(|c| c.len() != k) {
        return Err(Error::SizeMismatch { expected: k, found: bad.len() });
    }
    let mut out = first.clone();
    for code in &codes[1..] {
        for (o, &v) in out.iter_mut().zip(code) {
            match mode {
                PoolingMode::Average => *o += v,
                PoolingMode::Max => *o = o.max(v),
            }
        }
    }
    if mode == PoolingMode::Average {
        let n = codes.len() as f64;
        out.iter_mut().for_each(|v| *v /= n);
    }
    Ok(out)
}

/// Sparse codes of every node's delta-started walk feature.
pub fn node_codes(g: &Graph, dict: &Dictionary, tau: usize, metric: Metric) -> Result<Vec<Vec<f64>>> {
    check_dict_dim(dict, tau)?;
    node_delta_features(g, tau, metric)?
        .iter()
        .map(|f| lasso(dict, f.values()))
        .collect()
}

fn check_dict_dim(dict: &Dictionary, tau: usize) -> Result<()> {
    if dict.dim != feature_dim(tau) {
        return Err(Error::SizeMismatch { expected: feature_dim(tau), found: dict.dim });
    }
    Ok(())
}

/// Sparse-coded, pooled embedding of length `K`.
pub fn embed_sc(
    g: &Graph,
    dict: &Dictionary,
    tau: usize,
    mode: PoolingMode,
    metric: Metric,
) -> Result<GraphEmbedding> {
    let codes = node_codes(g, dict, tau, metric)?;
    Ok(GraphEmbedding { values: pool(&codes, mode)?, method: EmbeddingMethod::Walk2vecSc, tau })
}

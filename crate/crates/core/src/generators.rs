//! Seeded generators for Erdős–Rényi, two-block SBM and planted-clique graphs.
//!
//! Edge pairs `(i, j)`, `i < j`, are visited in lexicographic order and each
//! consumes exactly one uniform draw from the `PAIRS` stream, so an SBM with
//! `p_in == p_out == p` reproduces `gen_er(n, p)` bit for bit. Block labels
//! and clique members come from their own streams.
//!
//! Graphs with an isolated node are rejected and regenerated with
//! `seed + 1`, `seed + 2`, ... up to [`RESAMPLE_ATTEMPTS`] tries.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{streams, Seed, Stream};

pub const RESAMPLE_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "model", rename_all = "snake_case"))]
pub enum ModelVariant {
    Er { p: f64 },
    Sbm { p_in: f64, p_out: f64 },
    PlantedClique { p: f64, k: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModelParams {
    pub n: usize,
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub variant: ModelVariant,
}

fn check_probability(p: f64) -> Result<()> {
    if p.is_finite() && (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter("probability outside [0, 1]"))
    }
}

impl ModelParams {
    pub fn er(n: usize, p: f64) -> Self {
        ModelParams { n, variant: ModelVariant::Er { p } }
    }

    pub fn sbm(n: usize, p_in: f64, p_out: f64) -> Self {
        ModelParams { n, variant: ModelVariant::Sbm { p_in, p_out } }
    }

    pub fn planted_clique(n: usize, p: f64, k: usize) -> Self {
        ModelParams { n, variant: ModelVariant::PlantedClique { p, k } }
    }

    pub fn validate(&self) -> Result<()> {
        match self.variant {
            ModelVariant::Er { p } => {
                check_probability(p)?;
                if self.n < 2 {
                    return Err(Error::InvalidParameter("ER graphs need n >= 2"));
                }
            }
            ModelVariant::Sbm { p_in, p_out } => {
                check_probability(p_in)?;
                check_probability(p_out)?;
                if p_in < p_out {
                    return Err(Error::InvalidParameter("SBM requires p_in >= p_out"));
                }
                if self.n < 4 {
                    return Err(Error::InvalidParameter("SBM graphs need n >= 4"));
                }
            }
            ModelVariant::PlantedClique { p, k } => {
                check_probability(p)?;
                if self.n < 2 {
                    return Err(Error::InvalidParameter("planted-clique graphs need n >= 2"));
                }
                if k < 2 || k > self.n {
                    return Err(Error::InvalidParameter("clique size must satisfy 2 <= k <= n"));
                }
            }
        }
        Ok(())
    }

    pub fn generate(&self, seed: Seed) -> Result<Graph> {
        match self.variant {
            ModelVariant::Er { p } => gen_er(self.n, p, seed),
            ModelVariant::Sbm { p_in, p_out } => gen_sbm(self.n, p_in, p_out, seed),
            ModelVariant::PlantedClique { p, k } => gen_planted_clique(self.n, p, k, seed),
        }
    }
}

/// `(p_in, p_out) = (p + δ/2, p − δ/2)`, so the mean density stays `p`.
pub fn sbm_params_from(p: f64, delta: f64) -> Result<(f64, f64)> {
    if !p.is_finite() || !delta.is_finite() || delta < 0.0 {
        return Err(Error::InvalidParameter("need finite p and delta >= 0"));
    }
    let p_in = p + delta / 2.0;
    let p_out = p - delta / 2.0;
    if p_out < 0.0 || p_in > 1.0 {
        return Err(Error::InvalidParameter("p ± delta/2 leaves [0, 1]"));
    }
    Ok((p_in, p_out))
}

fn with_resample(seed: Seed, mut attempt: impl FnMut(Seed) -> Graph) -> Result<(Graph, Seed)> {
    for a in 0..RESAMPLE_ATTEMPTS {
        let s = seed.wrapping_add(a as u64);
        let g = attempt(s);
        if g.isolated_node().is_none() {
            return Ok((g, s));
        }
    }
    Err(Error::ResampleLimit { attempts: RESAMPLE_ATTEMPTS })
}

fn er_once(n: usize, p: f64, seed: Seed) -> Graph {
    let mut pairs = Stream::new(seed, streams::PAIRS);
    Graph::from_pair_mask(n, |_, _| pairs.bernoulli(p))
}

pub fn gen_er(n: usize, p: f64, seed: Seed) -> Result<Graph> {
    ModelParams::er(n, p).validate()?;
    with_resample(seed, |s| er_once(n, p, s)).map(|(g, _)| g)
}

/// Two equal blocks (sizes ⌈n/2⌉ and ⌊n/2⌋) assigned through a seeded
/// permutation, so node ids carry no block information.
pub fn gen_sbm(n: usize, p_in: f64, p_out: f64, seed: Seed) -> Result<Graph> {
    gen_sbm_with_blocks(n, p_in, p_out, seed).map(|(g, _)| g)
}

/// Same as [`gen_sbm`] but also returns each node's block (0 or 1).
pub fn gen_sbm_with_blocks(
    n: usize,
    p_in: f64,
    p_out: f64,
    seed: Seed,
) -> Result<(Graph, Vec<u8>)> {
    ModelParams::sbm(n, p_in, p_out).validate()?;
    let first_block = n.div_ceil(2);
    let mut blocks = Vec::new();
    let (g, _) = with_resample(seed, |s| {
        let slots = Stream::new(s, streams::BLOCKS).permutation(n);
        blocks = slots.iter().map(|&slot| u8::from(slot >= first_block)).collect();
        let mut pairs = Stream::new(s, streams::PAIRS);
        Graph::from_pair_mask(n, |i, j| {
            let p = if blocks[i] == blocks[j] { p_in } else { p_out };
            pairs.bernoulli(p)
        })
    })?;
    Ok((g, blocks))
}

pub fn gen_planted_clique(n: usize, p: f64, k: usize, seed: Seed) -> Result<Graph> {
    gen_planted_clique_with_members(n, p, k, seed).map(|(g, _)| g)
}

/// ER base graph plus a uniformly random `k`-subset made fully adjacent.
/// Returns the sorted clique members alongside the graph.
pub fn gen_planted_clique_with_members(
    n: usize,
    p: f64,
    k: usize,
    seed: Seed,
) -> Result<(Graph, Vec<usize>)> {
    ModelParams::planted_clique(n, p, k).validate()?;
    let (base, used) = with_resample(seed, |s| er_once(n, p, s))?;
    let mut members = Stream::new(used, streams::CLIQUE).sample_indices(n, k);
    members.sort_unstable();
    Ok((plant_clique(&base, &members), members))
}

fn plant_clique(base: &Graph, members: &[usize]) -> Graph {
    let mut lists: Vec<Vec<u32>> = (0..base.n()).map(|i| base.neighbors(i).to_vec()).collect();
    for &i in members {
        lists[i].extend(members.iter().filter(|&&j| j != i).map(|&j| j as u32));
    }
    for &i in members {
        lists[i].sort_unstable();
        lists[i].dedup();
    }
    Graph::from_sorted_lists(lists)
}

//! Grid sweeps: generate both model classes, embed, train a forest on the
//! training split and report test AUC per parameter cell.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use walk2vec_core::embed::embed_walk2vec;
use walk2vec_core::forest::{train_forest, LabeledDataset};
use walk2vec_core::generators::{gen_er, gen_planted_clique, gen_sbm, sbm_params_from};
use walk2vec_core::rng::{streams, Stream};
use walk2vec_core::sparse::{dict_learn, embed_sc, lasso, pool, DictLearnConfig};
use walk2vec_core::thresholds::{beta_crit, delta_crit};
use walk2vec_core::walk::{node_delta_features, WalkFeature};
use walk2vec_core::{auc, topo_features, Dictionary, Graph, Metric, PoolingMode, Seed};

use crate::error::ExperimentError;
use crate::io::fmt_f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Problem {
    ErVsSbm,
    PlantedClique,
}

impl Problem {
    pub fn as_str(self) -> &'static str {
        match self {
            Problem::ErVsSbm => "er_vs_sbm",
            Problem::PlantedClique => "planted_clique",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Walk2vec,
    #[serde(alias = "sc")]
    Walk2vecSc,
    #[serde(alias = "topo")]
    Topological,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Walk2vec => "walk2vec",
            Method::Walk2vecSc => "walk2vec-sc",
            Method::Topological => "topological",
        }
    }
}

fn default_atoms() -> usize {
    walk2vec_core::sparse::DEFAULT_ATOMS
}
fn default_lambda1() -> f64 {
    walk2vec_core::sparse::DEFAULT_LAMBDA1
}
fn default_trees() -> usize {
    100
}
fn default_epochs() -> usize {
    5
}
fn default_batch() -> usize {
    256
}
fn default_max_vectors() -> usize {
    50_000
}

/// Sweep description, read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentGrid {
    pub problem: Problem,
    pub n: usize,
    pub p_values: Vec<f64>,
    /// δ for `er_vs_sbm`, β = k/√n for `planted_clique`.
    pub secondary_values: Vec<f64>,
    pub graphs_per_class: usize,
    pub train_fraction: f64,
    pub tau: usize,
    pub method: Method,
    #[serde(default)]
    pub pooling: PoolingMode,
    #[serde(default)]
    pub metric: Metric,
    pub seed: Seed,
    #[serde(default = "default_atoms")]
    pub atoms: usize,
    #[serde(default = "default_lambda1")]
    pub lambda1: f64,
    #[serde(default = "default_trees")]
    pub n_trees: usize,
    #[serde(default = "default_epochs")]
    pub dict_epochs: usize,
    #[serde(default = "default_batch")]
    pub dict_batch_size: usize,
    #[serde(default = "default_max_vectors")]
    pub dict_max_vectors: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellSpec {
    pub index: usize,
    pub p: f64,
    pub secondary: f64,
}

/// The generator used for the positive class of one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AltModel {
    Sbm { p_in: f64, p_out: f64 },
    Clique { k: usize },
    /// `k < 2`: nothing to plant, the class is plain ER.
    Er,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub problem: Problem,
    pub method: Method,
    pub n: usize,
    pub p: f64,
    pub secondary: f64,
    pub threshold: f64,
    pub auc: f64,
    pub n_train: usize,
    pub n_test: usize,
    pub seed: Seed,
    pub wall_ms: u64,
}

/// Held-out embeddings of one cell, kept for PCA projections.
#[derive(Debug, Clone)]
pub struct TestEmbedding {
    pub cell: usize,
    pub class: u8,
    pub instance: usize,
    pub param: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct CellRun {
    pub results: Vec<CellResult>,
    /// Per requested method, in the same order as `results`.
    pub test_embeddings: Vec<Vec<TestEmbedding>>,
}

/// Clique size for `β` on `n` nodes.
pub fn clique_size(beta: f64, n: usize) -> usize {
    (beta * (n as f64).sqrt()).round() as usize
}

impl ExperimentGrid {
    pub fn from_json(text: &str) -> Result<Self, ExperimentError> {
        let grid: ExperimentGrid = serde_json::from_str(text).map_err(|e| {
            ExperimentError::Config(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        grid.validate()?;
        Ok(grid)
    }

    pub fn train_per_class(&self) -> usize {
        (self.graphs_per_class as f64 * self.train_fraction).round() as usize
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |msg: String| Err(ExperimentError::Config(msg));
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return bad(format!("train_fraction must lie in (0, 1), got {}", self.train_fraction));
        }
        let train = self.train_per_class();
        if train == 0 || train >= self.graphs_per_class {
            return bad("graphs_per_class too small for a train/test split".into());
        }
        if self.tau == 0 {
            return bad("tau must be at least 1".into());
        }
        if self.p_values.is_empty() || self.secondary_values.is_empty() {
            return bad("p_values and secondary_values must be nonempty".into());
        }
        if self.n_trees == 0 || self.atoms == 0 || self.dict_batch_size == 0 || self.dict_max_vectors == 0
        {
            return bad("n_trees, atoms, dict_batch_size and dict_max_vectors must be positive".into());
        }
        for cell in self.cells() {
            if !(cell.p > 0.0 && cell.p < 1.0) {
                return bad(format!("p must lie in (0, 1), got {}", cell.p));
            }
            if let Err(e) = self.alt_model(&cell) {
                return bad(format!("cell p={}, secondary={}: {e}", cell.p, cell.secondary));
            }
        }
        if self.problem == Problem::ErVsSbm && self.n < 4 {
            return bad("er_vs_sbm needs n >= 4".into());
        }
        Ok(())
    }

    /// Cells in p-major order.
    pub fn cells(&self) -> Vec<CellSpec> {
        let mut out = Vec::new();
        for &p in &self.p_values {
            for &secondary in &self.secondary_values {
                out.push(CellSpec { index: out.len(), p, secondary });
            }
        }
        out
    }

    pub fn alt_model(&self, cell: &CellSpec) -> Result<AltModel, walk2vec_core::Error> {
        match self.problem {
            Problem::ErVsSbm => {
                let (p_in, p_out) = sbm_params_from(cell.p, cell.secondary)?;
                Ok(AltModel::Sbm { p_in, p_out })
            }
            Problem::PlantedClique => {
                if !(cell.secondary >= 0.0) {
                    return Err(walk2vec_core::Error::InvalidParameter("beta must be >= 0"));
                }
                let k = clique_size(cell.secondary, self.n);
                if k > self.n {
                    return Err(walk2vec_core::Error::InvalidParameter("clique larger than graph"));
                }
                Ok(if k < 2 { AltModel::Er } else { AltModel::Clique { k } })
            }
        }
    }

    pub fn threshold(&self, p: f64) -> f64 {
        match self.problem {
            Problem::ErVsSbm => delta_crit(p, self.n).unwrap_or(f64::NAN),
            Problem::PlantedClique => beta_crit(p).unwrap_or(f64::NAN),
        }
    }

    /// Seed of graph `instance` of `class` in `cell`.
    pub fn instance_seed(&self, cell: usize, class: u8, instance: usize) -> Seed {
        self.seed.derive(&[cell as u64, u64::from(class), instance as u64])
    }

    fn cell_seed(&self, cell: usize, tag: u64) -> Seed {
        self.seed.derive(&[cell as u64, tag])
    }

    fn dict_config(&self) -> DictLearnConfig {
        DictLearnConfig {
            atoms: self.atoms,
            lambda1: self.lambda1,
            epochs: self.dict_epochs,
            batch_size: self.dict_batch_size,
        }
    }
}

const DICT_TAG: u64 = 0xD1C7;
const FOREST_TAG: u64 = 0xF0E5;

struct Instance {
    class: u8,
    index: usize,
}

#[derive(Default)]
struct InstanceOutput {
    walk2vec: Option<Vec<f64>>,
    topological: Option<Vec<f64>>,
    sc: Option<Vec<f64>>,
    node_features: Option<Vec<WalkFeature>>,
}

/// Runs one cell for the grid's method.
pub fn run_cell(grid: &ExperimentGrid, index: usize) -> Result<CellResult, ExperimentError> {
    let run = run_cell_methods(grid, index, &[grid.method])?;
    Ok(run.results.into_iter().next().unwrap())
}

/// Runs one cell, scoring every method in `methods` on the same graphs.
///
/// Graphs `0..train_per_class` of each class form the training split and
/// the rest the test split. For the sparse-coded method the dictionary is
/// learned from training-split node features only.
pub fn run_cell_methods(
    grid: &ExperimentGrid,
    index: usize,
    methods: &[Method],
) -> Result<CellRun, ExperimentError> {
    let started = Instant::now();
    let cells = grid.cells();
    let cell = *cells
        .get(index)
        .ok_or_else(|| ExperimentError::Config(format!("cell index {index} out of range")))?;
    let gen_err = |source| ExperimentError::Generation { cell: index, p: cell.p, secondary: cell.secondary, source };
    let num_err = |source| ExperimentError::Numerical { cell: index, p: cell.p, secondary: cell.secondary, source };
    let alt = grid.alt_model(&cell).map_err(gen_err)?;
    let wants = |m: Method| methods.contains(&m);

    let train = grid.train_per_class();
    let instances = |range: std::ops::Range<usize>| -> Vec<Instance> {
        [0u8, 1]
            .into_iter()
            .flat_map(|class| range.clone().map(move |index| Instance { class, index }))
            .collect()
    };
    let train_set = instances(0..train);
    let test_set = instances(train..grid.graphs_per_class);

    let generate = |inst: &Instance| -> Result<Graph, ExperimentError> {
        let seed = grid.instance_seed(index, inst.class, inst.index);
        let g = match (inst.class, alt) {
            (0, _) | (_, AltModel::Er) => gen_er(grid.n, cell.p, seed),
            (_, AltModel::Sbm { p_in, p_out }) => gen_sbm(grid.n, p_in, p_out, seed),
            (_, AltModel::Clique { k }) => gen_planted_clique(grid.n, cell.p, k, seed),
        };
        g.map_err(gen_err)
    };
    let common = |g: &Graph, out: &mut InstanceOutput| -> Result<(), ExperimentError> {
        if wants(Method::Walk2vec) {
            out.walk2vec = Some(embed_walk2vec(g, grid.tau, grid.metric).map_err(num_err)?.values);
        }
        if wants(Method::Topological) {
            out.topological = Some(topo_features(g).map_err(num_err)?.values.to_vec());
        }
        Ok(())
    };

    let train_out: Vec<InstanceOutput> = train_set
        .par_iter()
        .map(|inst| {
            let g = generate(inst)?;
            let mut out = InstanceOutput::default();
            common(&g, &mut out)?;
            if wants(Method::Walk2vecSc) {
                out.node_features = Some(node_delta_features(&g, grid.tau, grid.metric).map_err(num_err)?);
            }
            Ok(out)
        })
        .collect::<Result<_, ExperimentError>>()?;

    let mut train_out = train_out;
    let dict = if wants(Method::Walk2vecSc) {
        let dict = learn_cell_dictionary(grid, index, &train_out).map_err(num_err)?;
        let pooled: Vec<Vec<f64>> = train_out
            .par_iter()
            .map(|out| {
                let codes = out
                    .node_features
                    .as_ref()
                    .unwrap()
                    .iter()
                    .map(|f| lasso(&dict, f.values()))
                    .collect::<Result<Vec<_>, _>>()?;
                pool(&codes, grid.pooling)
            })
            .collect::<Result<_, _>>()
            .map_err(num_err)?;
        for (out, v) in train_out.iter_mut().zip(pooled) {
            out.sc = Some(v);
            out.node_features = None;
        }
        Some(dict)
    } else {
        None
    };

    let test_out: Vec<InstanceOutput> = test_set
        .par_iter()
        .map(|inst| {
            let g = generate(inst)?;
            let mut out = InstanceOutput::default();
            common(&g, &mut out)?;
            if let Some(dict) = &dict {
                out.sc = Some(embed_sc(&g, dict, grid.tau, grid.pooling, grid.metric).map_err(num_err)?.values);
            }
            Ok(out)
        })
        .collect::<Result<_, ExperimentError>>()?;

    let train_labels: Vec<u8> = train_set.iter().map(|i| i.class).collect();
    let test_labels: Vec<u8> = test_set.iter().map(|i| i.class).collect();
    let mut results = Vec::new();
    let mut test_embeddings = Vec::new();
    for (m_idx, &method) in methods.iter().enumerate() {
        let pick = |out: &InstanceOutput| -> Vec<f64> {
            match method {
                Method::Walk2vec => out.walk2vec.clone(),
                Method::Walk2vecSc => out.sc.clone(),
                Method::Topological => out.topological.clone(),
            }
            .unwrap()
        };
        let data = LabeledDataset::new(train_out.iter().map(pick).collect(), train_labels.clone())
            .map_err(num_err)?;
        let forest = train_forest(&data, grid.n_trees, grid.cell_seed(index, FOREST_TAG + m_idx as u64))
            .map_err(num_err)?;
        let test_x: Vec<Vec<f64>> = test_out.iter().map(pick).collect();
        let scores = test_x
            .iter()
            .map(|x| forest.predict_score(x))
            .collect::<Result<Vec<f64>, _>>()
            .map_err(num_err)?;
        let area = auc(&scores, &test_labels).map_err(num_err)?;
        results.push(CellResult {
            problem: grid.problem,
            method,
            n: grid.n,
            p: cell.p,
            secondary: cell.secondary,
            threshold: grid.threshold(cell.p),
            auc: area,
            n_train: train_set.len(),
            n_test: test_set.len(),
            seed: grid.seed,
            wall_ms: 0,
        });
        test_embeddings.push(
            test_set
                .iter()
                .zip(test_x)
                .map(|(inst, values)| TestEmbedding {
                    cell: index,
                    class: inst.class,
                    instance: inst.index,
                    param: if inst.class == 1 { cell.secondary } else { 0.0 },
                    values,
                })
                .collect(),
        );
    }
    let wall_ms = started.elapsed().as_millis() as u64;
    for r in &mut results {
        r.wall_ms = wall_ms;
    }
    Ok(CellRun { results, test_embeddings })
}

/// Dictionary for one cell from at most `dict_max_vectors` node features
/// drawn uniformly (by seed) from the training graphs.
fn learn_cell_dictionary(
    grid: &ExperimentGrid,
    cell: usize,
    train_out: &[InstanceOutput],
) -> walk2vec_core::Result<Dictionary> {
    let all: Vec<&[f64]> = train_out
        .iter()
        .flat_map(|o| o.node_features.as_ref().unwrap().iter().map(|f| f.values()))
        .collect();
    let seed = grid.cell_seed(cell, DICT_TAG);
    let corpus: Vec<&[f64]> = if all.len() > grid.dict_max_vectors {
        let mut picks = Stream::new(seed, streams::SUBSAMPLE).sample_indices(all.len(), grid.dict_max_vectors);
        picks.sort_unstable();
        picks.into_iter().map(|i| all[i]).collect()
    } else {
        all
    };
    dict_learn(&corpus, &grid.dict_config(), seed)
}

/// Runs every cell; a failing cell is reported and the rest still run.
pub fn run_grid(grid: &ExperimentGrid) -> Vec<Result<CellRun, ExperimentError>> {
    (0..grid.cells().len()).map(|i| run_cell_methods(grid, i, &[grid.method])).collect()
}

pub const RESULTS_HEADER: &str = "problem,method,n,p,secondary,threshold,auc,n_train,n_test,seed,wall_ms";

/// Results table. With `omit_timing` the `wall_ms` column is written as 0
/// so reruns produce identical bytes.
pub fn results_csv(results: &[CellResult], omit_timing: bool) -> String {
    let mut out = String::from(RESULTS_HEADER);
    out.push('\n');
    for r in results {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.problem.as_str(),
            r.method.as_str(),
            r.n,
            fmt_f64(r.p),
            fmt_f64(r.secondary),
            fmt_f64(r.threshold),
            fmt_f64(r.auc),
            r.n_train,
            r.n_test,
            r.seed.0,
            if omit_timing { 0 } else { r.wall_ms }
        )
        .unwrap();
    }
    out
}

pub const PCA_HEADER: &str = "graph_id,class,param,x,y";

pub fn pca_csv(rows: &[(String, u8, f64, [f64; 2])]) -> String {
    let mut out = String::from(PCA_HEADER);
    out.push('\n');
    for (id, class, param, [x, y]) in rows {
        writeln!(out, "{id},{class},{},{},{}", fmt_f64(*param), fmt_f64(*x), fmt_f64(*y)).unwrap();
    }
    out
}

/// PCA of the held-out embeddings of every cell.
pub fn sweep_pca(embeddings: &[TestEmbedding]) -> walk2vec_core::Result<String> {
    let points: Vec<Vec<f64>> = embeddings.iter().map(|e| e.values.clone()).collect();
    let coords = walk2vec_core::pca_2d(&points)?;
    let rows: Vec<_> = embeddings
        .iter()
        .zip(coords)
        .map(|(e, xy)| (format!("c{}-{}-{}", e.cell, e.class, e.instance), e.class, e.param, xy))
        .collect();
    Ok(pca_csv(&rows))
}

/// `p,secondary,threshold` rows without running anything.
pub fn threshold_table(grid: &ExperimentGrid) -> String {
    let mut out = String::from("p,secondary,threshold,above_threshold\n");
    for cell in grid.cells() {
        let t = grid.threshold(cell.p);
        writeln!(out, "{},{},{},{}", fmt_f64(cell.p), fmt_f64(cell.secondary), fmt_f64(t), cell.secondary > t)
            .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn small_grid(problem: Problem, secondary: Vec<f64>, method: Method) -> ExperimentGrid {
        ExperimentGrid {
            problem,
            n: 60,
            p_values: vec![0.2],
            secondary_values: secondary,
            graphs_per_class: 12,
            train_fraction: 0.5,
            tau: 4,
            method,
            pooling: PoolingMode::Average,
            metric: Metric::Distance,
            seed: Seed(3),
            atoms: 8,
            lambda1: 0.15,
            n_trees: 20,
            dict_epochs: 2,
            dict_batch_size: 64,
            dict_max_vectors: 400,
        }
    }

    #[test]
    fn clique_sizes_match_table() {
        for (beta, k) in [(0.316, 10), (0.664, 21), (0.980, 31), (1.044, 33), (1.233, 39), (1.486, 47), (1.676, 53), (1.834, 58), (2.024, 64)] {
            assert_eq!(clique_size(beta, 1000), k);
        }
    }

    #[test]
    fn config_validation() {
        let mut g = small_grid(Problem::ErVsSbm, vec![0.0, 0.1], Method::Walk2vec);
        assert!(g.validate().is_ok());
        g.train_fraction = 1.0;
        assert!(g.validate().is_err());
        let mut g = small_grid(Problem::ErVsSbm, vec![0.5], Method::Walk2vec);
        assert!(g.validate().is_err());
        g.problem = Problem::PlantedClique;
        assert!(g.validate().is_ok());
    }

    #[test]
    fn unknown_fields_are_reported_with_position() {
        let err = ExperimentGrid::from_json("{\n  \"problem\": \"er_vs_sbm\",\n  \"bogus\": 1\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
        assert_eq!(err.exit_code(), crate::error::exit::CONFIG);
    }

    #[test]
    fn splits_are_disjoint() {
        let g = small_grid(Problem::ErVsSbm, vec![0.1], Method::Walk2vec);
        let train = g.train_per_class();
        let mut seen = std::collections::HashSet::new();
        for class in 0..2u8 {
            for i in 0..g.graphs_per_class {
                assert!(seen.insert(g.instance_seed(0, class, i)));
            }
        }
        assert_eq!(train, 6);
    }

    #[test]
    fn single_cell_grid_matches_run_cell() {
        let g = small_grid(Problem::ErVsSbm, vec![0.1], Method::Walk2vec);
        let from_grid = run_grid(&g).pop().unwrap().unwrap().results.pop().unwrap();
        let direct = run_cell(&g, 0).unwrap();
        assert_eq!(from_grid.auc, direct.auc);
    }

    #[test]
    fn threshold_table_flags_cells() {
        let mut g = small_grid(Problem::PlantedClique, vec![0.3, 1.5], Method::Walk2vec);
        g.p_values = vec![0.5];
        let t = threshold_table(&g);
        assert!(t.contains(",false\n") && t.contains(",true\n"));
    }
}

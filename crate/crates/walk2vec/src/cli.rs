use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;
use walk2vec_core::forest::{train_forest, LabeledDataset};
use walk2vec_core::generators::{gen_er, gen_planted_clique, gen_sbm, sbm_params_from};
use walk2vec_core::sparse::{dict_learn, embed_sc, DictLearnConfig};
use walk2vec_core::walk::node_delta_features;
use walk2vec_core::{auc, embed_walk2vec, pca_2d, topo_features, Graph, Metric, PoolingMode, Seed};

use crate::experiments::{
    pca_csv, results_csv, run_cell_methods, sweep_pca, threshold_table, CellResult, ExperimentGrid,
    TestEmbedding,
};
use crate::io;
use crate::manifest::RunManifest;

#[derive(Debug, Parser)]
#[command(name = "walk2vec", version, about = "Random-walk graph embeddings for model selection")]
pub struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "WALK2VEC_JOBS")]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample graphs and write them as edge lists.
    Gen(GenArgs),
    /// Embed edge-list files into a CSV table.
    Embed(EmbedArgs),
    /// Learn a dictionary from the node features of a set of graphs.
    TrainDict(TrainDictArgs),
    /// Train a random forest on two classes of embeddings and report test AUC.
    Classify(ClassifyArgs),
    /// Run a grid experiment described by a JSON config.
    Sweep(SweepArgs),
    /// Project embedding tables onto their top two principal axes.
    Pca(PcaArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelArg {
    Er,
    Sbm,
    Clique,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Walk2vec,
    Walk2vecSc,
    Topological,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MetricArg {
    Distance,
    Similarity,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Distance => Metric::Distance,
            MetricArg::Similarity => Metric::Similarity,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PoolingArg {
    Average,
    Max,
}

impl From<PoolingArg> for PoolingMode {
    fn from(m: PoolingArg) -> Self {
        match m {
            PoolingArg::Average => PoolingMode::Average,
            PoolingArg::Max => PoolingMode::Max,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,
    #[arg(long)]
    pub n: usize,
    /// Edge probability (ER and clique background; SBM average).
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub p_in: Option<f64>,
    #[arg(long)]
    pub p_out: Option<f64>,
    /// SBM gap `p_in − p_out`, split evenly around `--p`.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Clique size.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    /// Edge-list files; the file stem becomes the graph id.
    #[arg(long, required = true, num_args = 1..)]
    pub input: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "walk2vec")]
    pub method: MethodArg,
    #[arg(long, default_value_t = 15)]
    pub tau: usize,
    /// Dictionary file, required for walk2vec-sc.
    #[arg(long)]
    pub dict: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "average")]
    pub pooling: PoolingArg,
    #[arg(long, value_enum, default_value = "distance")]
    pub metric: MetricArg,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TrainDictArgs {
    #[arg(long, required = true, num_args = 1..)]
    pub input: Vec<PathBuf>,
    #[arg(long, default_value_t = 15)]
    pub tau: usize,
    #[arg(long, default_value_t = walk2vec_core::sparse::DEFAULT_ATOMS)]
    pub atoms: usize,
    #[arg(long, default_value_t = walk2vec_core::sparse::DEFAULT_LAMBDA1)]
    pub lambda1: f64,
    #[arg(long, default_value_t = 5)]
    pub epochs: usize,
    #[arg(long, default_value_t = 256)]
    pub batch_size: usize,
    #[arg(long, value_enum, default_value = "distance")]
    pub metric: MetricArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub train0: PathBuf,
    #[arg(long)]
    pub train1: PathBuf,
    #[arg(long)]
    pub test0: PathBuf,
    #[arg(long)]
    pub test1: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub trees: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the trained forest as JSON.
    #[arg(long)]
    pub model_out: Option<PathBuf>,
    /// Write per-graph test scores as CSV.
    #[arg(long)]
    pub scores_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Only tabulate the theoretical thresholds of the grid.
    #[arg(long)]
    pub threshold_only: bool,
    /// Write 0 in the wall_ms column so reruns are byte-identical.
    #[arg(long)]
    pub omit_timing: bool,
    /// Also write a PCA projection of all held-out embeddings.
    #[arg(long)]
    pub pca: bool,
}

#[derive(Debug, Args)]
pub struct PcaArgs {
    /// `path:class:param` triples, one per embedding table.
    #[arg(long, required = true, num_args = 1..)]
    pub input: Vec<String>,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            bail!(crate::ExperimentError::Config("--jobs must be at least 1".into()));
        }
        pool = pool.num_threads(jobs);
    }
    let pool = pool.build()?;
    pool.install(|| match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Embed(a) => cmd_embed(a),
        Command::TrainDict(a) => cmd_train_dict(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Pca(a) => cmd_pca(a),
    })
}

fn write_file(path: &Path, text: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn manifest_dir(path: &Path) -> &Path {
    path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."))
}

fn graph_id(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn config_err(msg: &str) -> anyhow::Error {
    crate::ExperimentError::Config(msg.to_string()).into()
}

fn cmd_gen(a: GenArgs) -> anyhow::Result<()> {
    let p = a.p;
    let mut sbm = None;
    let generate: Box<dyn Fn(Seed) -> walk2vec_core::Result<Graph> + Sync> = match a.model {
        ModelArg::Er => {
            let p = p.ok_or_else(|| config_err("er needs --p"))?;
            Box::new(move |s| gen_er(a.n, p, s))
        }
        ModelArg::Sbm => {
            let (p_in, p_out) = match (a.p_in, a.p_out, p, a.delta) {
                (Some(i), Some(o), None, None) => (i, o),
                (None, None, Some(p), Some(d)) => sbm_params_from(p, d)?,
                _ => return Err(config_err("sbm needs either --p-in and --p-out, or --p and --delta")),
            };
            sbm = Some((p_in, p_out));
            Box::new(move |s| gen_sbm(a.n, p_in, p_out, s))
        }
        ModelArg::Clique => {
            let p = p.ok_or_else(|| config_err("clique needs --p"))?;
            let k = a.k.ok_or_else(|| config_err("clique needs --k"))?;
            Box::new(move |s| gen_planted_clique(a.n, p, k, s))
        }
    };
    fs::create_dir_all(&a.out)?;
    let seed = Seed(a.seed);
    let graphs = (0..a.count)
        .into_par_iter()
        .map(|i| generate(seed.derive(&[i as u64])))
        .collect::<walk2vec_core::Result<Vec<Graph>>>()?;
    let mut manifest = RunManifest::start(
        "gen",
        json!({"model": format!("{:?}", a.model).to_lowercase(), "n": a.n, "p": a.p, "p_in": sbm.map(|s| s.0),
               "p_out": sbm.map(|s| s.1), "delta": a.delta, "k": a.k, "count": a.count}),
        Some(seed),
    );
    for (i, g) in graphs.iter().enumerate() {
        let name = format!("graph_{i:05}.edges");
        fs::write(a.out.join(&name), io::write_edge_list(g))?;
        manifest.outputs.push(name);
    }
    manifest.write(&a.out)
}

fn read_graphs(paths: &[PathBuf]) -> anyhow::Result<Vec<(String, Graph)>> {
    paths.par_iter().map(|p| Ok((graph_id(p), io::read_edge_list(p)?))).collect()
}

fn cmd_embed(a: EmbedArgs) -> anyhow::Result<()> {
    let graphs = read_graphs(&a.input)?;
    let metric = Metric::from(a.metric);
    let dict = match (a.method, &a.dict) {
        (MethodArg::Walk2vecSc, Some(path)) => Some(io::read_dictionary(path)?),
        (MethodArg::Walk2vecSc, None) => return Err(config_err("walk2vec-sc needs --dict")),
        _ => None,
    };
    let rows = graphs
        .par_iter()
        .map(|(id, g)| {
            let values = match a.method {
                MethodArg::Walk2vec => embed_walk2vec(g, a.tau, metric)?.values,
                MethodArg::Walk2vecSc => embed_sc(g, dict.as_ref().unwrap(), a.tau, a.pooling.into(), metric)?.values,
                MethodArg::Topological => topo_features(g)?.values.to_vec(),
            };
            Ok((id.clone(), values))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    write_file(&a.out, &io::write_embedding_csv(&rows))?;
    let mut manifest = RunManifest::start(
        "embed",
        json!({"method": format!("{:?}", a.method), "tau": a.tau, "inputs": a.input, "dict": a.dict,
               "pooling": format!("{:?}", a.pooling), "metric": format!("{:?}", a.metric)}),
        None,
    );
    manifest.outputs.push(a.out.display().to_string());
    manifest.write(manifest_dir(&a.out))
}

fn cmd_train_dict(a: TrainDictArgs) -> anyhow::Result<()> {
    let graphs = read_graphs(&a.input)?;
    let metric = Metric::from(a.metric);
    let features = graphs
        .par_iter()
        .map(|(_, g)| node_delta_features(g, a.tau, metric))
        .collect::<walk2vec_core::Result<Vec<_>>>()?;
    let corpus: Vec<&[f64]> = features.iter().flatten().map(|f| f.values()).collect();
    let config = DictLearnConfig { atoms: a.atoms, lambda1: a.lambda1, epochs: a.epochs, batch_size: a.batch_size };
    let dict = dict_learn(&corpus, &config, Seed(a.seed))?;
    write_file(&a.out, &io::write_dictionary(&dict))?;
    let mut manifest = RunManifest::start("train-dict", json!({"tau": a.tau, "config": config, "inputs": a.input}), Some(Seed(a.seed)));
    manifest.outputs.push(a.out.display().to_string());
    manifest.write(manifest_dir(&a.out))
}

fn cmd_classify(a: ClassifyArgs) -> anyhow::Result<()> {
    let load = |p: &Path| io::read_embedding_csv(p);
    let (train0, train1) = (load(&a.train0)?, load(&a.train1)?);
    let (test0, test1) = (load(&a.test0)?, load(&a.test1)?);
    let labelled = |c0: &[(String, Vec<f64>)], c1: &[(String, Vec<f64>)]| {
        let x: Vec<Vec<f64>> = c0.iter().chain(c1).map(|r| r.1.clone()).collect();
        let y: Vec<u8> = std::iter::repeat(0).take(c0.len()).chain(std::iter::repeat(1).take(c1.len())).collect();
        (x, y)
    };
    let (x, y) = labelled(&train0, &train1);
    let data = LabeledDataset::new(x, y)?;
    let forest = train_forest(&data, a.trees, Seed(a.seed))?;
    let (tx, ty) = labelled(&test0, &test1);
    let scores = tx.iter().map(|x| forest.predict_score(x)).collect::<walk2vec_core::Result<Vec<f64>>>()?;
    let area = auc(&scores, &ty)?;
    println!("auc {area:.6}");
    if let Some(path) = &a.model_out {
        write_file(path, &(serde_json::to_string(&forest)? + "\n"))?;
    }
    if let Some(path) = &a.scores_out {
        let mut out = String::from("graph_id,class,score\n");
        for ((row, class), s) in test0.iter().chain(&test1).zip(&ty).zip(&scores) {
            out.push_str(&format!("{},{class},{}\n", row.0, io::fmt_f64(*s)));
        }
        write_file(path, &out)?;
    }
    Ok(())
}

fn cmd_sweep(a: SweepArgs) -> anyhow::Result<()> {
    let text = fs::read_to_string(&a.config).with_context(|| format!("reading {}", a.config.display()))?;
    let grid = ExperimentGrid::from_json(&text)?;
    fs::create_dir_all(&a.out)?;
    let mut manifest = RunManifest::start("sweep", serde_json::to_value(&grid)?, Some(grid.seed));
    if a.threshold_only {
        fs::write(a.out.join("thresholds.csv"), threshold_table(&grid))?;
        manifest.outputs.push("thresholds.csv".into());
        return manifest.write(&a.out);
    }
    let mut results: Vec<CellResult> = Vec::new();
    let mut embeddings: Vec<TestEmbedding> = Vec::new();
    let mut first_error = None;
    for cell in grid.cells() {
        match run_cell_methods(&grid, cell.index, &[grid.method]) {
            Ok(mut run) => {
                let r = &run.results[0];
                eprintln!(
                    "cell {}: p={} secondary={} auc={:.4} ({} ms)",
                    cell.index, r.p, r.secondary, r.auc, r.wall_ms
                );
                results.append(&mut run.results);
                embeddings.append(&mut run.test_embeddings[0]);
            }
            Err(e) => {
                eprintln!("error: {e}");
                first_error.get_or_insert(e);
            }
        }
        fs::write(a.out.join("results.csv"), results_csv(&results, a.omit_timing))?;
    }
    manifest.outputs.push("results.csv".into());
    if a.pca && embeddings.len() >= 3 {
        fs::write(a.out.join("pca.csv"), sweep_pca(&embeddings)?)?;
        manifest.outputs.push("pca.csv".into());
    }
    manifest.write(&a.out)?;
    match first_error {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn parse_pca_input(spec: &str) -> anyhow::Result<(PathBuf, u8, f64)> {
    let mut parts = spec.rsplitn(3, ':');
    let (Some(param), Some(class), Some(path)) = (parts.next(), parts.next(), parts.next()) else {
        return Err(config_err(&format!("--input {spec:?} must be path:class:param")));
    };
    let class: u8 = class.parse().map_err(|_| config_err(&format!("bad class in {spec:?}")))?;
    let param: f64 = param.parse().map_err(|_| config_err(&format!("bad param in {spec:?}")))?;
    Ok((PathBuf::from(path), class, param))
}

fn cmd_pca(a: PcaArgs) -> anyhow::Result<()> {
    let mut ids = Vec::new();
    let mut points = Vec::new();
    for spec in &a.input {
        let (path, class, param) = parse_pca_input(spec)?;
        for (id, values) in io::read_embedding_csv(&path)? {
            ids.push((id, class, param));
            points.push(values);
        }
    }
    let coords = pca_2d(&points)?;
    let rows: Vec<_> = ids.into_iter().zip(coords).map(|((id, c, p), xy)| (id, c, p, xy)).collect();
    write_file(&a.out, &pca_csv(&rows))?;
    let mut manifest = RunManifest::start("pca", json!({"inputs": a.input}), None);
    manifest.outputs.push(a.out.display().to_string());
    manifest.write(manifest_dir(&a.out))
}

//! Times per-node walk features and sparse coding on benchmark-sized graphs.
//!
//! ```bash
//! cargo run --release -p walk2vec-core --example feature_timing
//! ```

use std::time::Instant;

use walk2vec_core::generators::gen_er;
use walk2vec_core::sparse::{dict_learn, lasso, DictLearnConfig};
use walk2vec_core::walk::node_delta_features;
use walk2vec_core::{embed_walk2vec, Metric, Seed};

fn main() {
    for p in [0.05, 0.5] {
        let g = gen_er(1000, p, Seed(1)).unwrap();
        let t = Instant::now();
        let feats = node_delta_features(&g, 15, Metric::Distance).unwrap();
        println!("p={p}: per-node features {:?}", t.elapsed());

        let t = Instant::now();
        embed_walk2vec(&g, 15, Metric::Distance).unwrap();
        println!("p={p}: landmark embedding {:?}", t.elapsed());

        let rows: Vec<&[f64]> = feats.iter().map(|f| f.values()).collect();
        let t = Instant::now();
        let cfg = DictLearnConfig { epochs: 1, ..DictLearnConfig::default() };
        let dict = dict_learn(&rows, &cfg, Seed(2)).unwrap();
        println!("p={p}: one-epoch dictionary on 1000 vectors {:?}", t.elapsed());

        let t = Instant::now();
        let nnz: usize = rows
            .iter()
            .map(|x| lasso(&dict, x).unwrap().iter().filter(|v| **v != 0.0).count())
            .sum();
        println!("p={p}: 1000 lasso codes {:?}, mean nnz {}", t.elapsed(), nnz as f64 / 1000.0);
    }
}

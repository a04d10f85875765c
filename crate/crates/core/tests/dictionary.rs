use walk2vec_core::generators::gen_er;
use walk2vec_core::sparse::{dict_learn_with_history, DictLearnConfig};
use walk2vec_core::walk::node_delta_features;
use walk2vec_core::{Metric, Seed};

#[test]
fn heldout_objective_does_not_grow() {
    for seed in 0..4 {
        let mut feats = Vec::new();
        for g in 0..6 {
            let graph = gen_er(150, 0.06, Seed(seed * 10 + g)).unwrap();
            feats.extend(node_delta_features(&graph, 8, Metric::Distance).unwrap());
        }
        let corpus: Vec<&[f64]> = feats.iter().map(|f| f.values()).collect();
        let cfg = DictLearnConfig { atoms: 20, lambda1: 0.15, epochs: 5, batch_size: 64 };
        let out = dict_learn_with_history(&corpus, &cfg, Seed(seed)).unwrap();
        let h = &out.heldout_objective;
        assert_eq!(h.len(), 6);
        for w in h.windows(2) {
            assert!(w[1] <= w[0] * 1.05, "seed {seed}: {h:?}");
        }
        assert!(h[5] < h[0], "seed {seed}: {h:?}");
        for j in 0..out.dictionary.atoms() {
            let norm: f64 = out.dictionary.atom(j).iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!(norm <= 1.0 + 1e-9);
        }
    }
}

#[test]
fn dictionary_learning_is_deterministic() {
    let graph = gen_er(120, 0.08, Seed(1)).unwrap();
    let feats = node_delta_features(&graph, 6, Metric::Distance).unwrap();
    let corpus: Vec<&[f64]> = feats.iter().map(|f| f.values()).collect();
    let cfg = DictLearnConfig { atoms: 10, lambda1: 0.15, epochs: 2, batch_size: 32 };
    let a = dict_learn_with_history(&corpus, &cfg, Seed(5)).unwrap();
    let b = dict_learn_with_history(&corpus, &cfg, Seed(5)).unwrap();
    assert_eq!(a.dictionary.columns(), b.dictionary.columns());
    assert_eq!(a.heldout_objective, b.heldout_objective);
}

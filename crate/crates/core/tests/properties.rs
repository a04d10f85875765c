mod common;

use proptest::prelude::*;
use walk2vec_core::embed::embed_walk2vec_with_landmarks;
use walk2vec_core::generators::{gen_er, gen_sbm};
use walk2vec_core::rng::Stream;
use walk2vec_core::sparse::{dict_learn, embed_sc, DictLearnConfig};
use walk2vec_core::walk::{node_delta_features, stationary_distribution, transition_step};
use walk2vec_core::{auc, Graph, Metric, Permutation, PoolingMode, Seed};

/// Raises `p` far enough above the isolated-node threshold that the
/// min-degree resampling cannot run out of attempts.
fn dense_enough(n: usize, p: f64) -> f64 {
    p.max(2.5 * (n as f64).ln() / n as f64).min(1.0)
}

fn graph_and_perm(n: usize, p: f64, seed: u64) -> (Graph, Permutation, Graph) {
    let g = gen_er(n, dense_enough(n, p), Seed(seed)).unwrap();
    let perm = Permutation::new(Stream::new(Seed(seed), 77).permutation(n)).unwrap();
    let h = g.permute(&perm).unwrap();
    (g, perm, h)
}

fn metric_strategy() -> impl Strategy<Value = Metric> {
    prop_oneof![Just(Metric::Distance), Just(Metric::Similarity)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn permute_preserves_structure(n in 2usize..60, p in 0.05f64..0.6, seed in any::<u64>()) {
        let (g, perm, h) = graph_and_perm(n, p, seed);
        prop_assert_eq!(g.edge_count(), h.edge_count());
        for (i, j) in g.edges() {
            prop_assert!(h.has_edge(perm.apply(i), perm.apply(j)));
        }
        let mut a = g.degrees();
        let mut b = h.degrees();
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);
        prop_assert_eq!(h.permute(&perm.inverse()).unwrap(), g);
    }

    #[test]
    fn node_features_are_equivariant(
        n in 20usize..120, p in 0.05f64..0.4, seed in any::<u64>(), tau in 1usize..16, metric in metric_strategy()
    ) {
        let (g, perm, h) = graph_and_perm(n, p, seed);
        let fg = node_delta_features(&g, tau, metric).unwrap();
        let fh = node_delta_features(&h, tau, metric).unwrap();
        for i in 0..n {
            let d = common::max_abs_diff(fg[i].values(), fh[perm.apply(i)].values());
            prop_assert!(d <= 1e-10, "node {} differs by {}", i, d);
        }
    }

    #[test]
    fn pagerank_is_equivariant(n in 10usize..120, p in 0.05f64..0.5, seed in any::<u64>()) {
        let (g, perm, h) = graph_and_perm(n, p, seed);
        let a = perm.permute_vector(&g.default_pagerank().unwrap()).unwrap();
        let b = h.default_pagerank().unwrap();
        prop_assert!(common::max_abs_diff(&a, &b) <= 1e-10);
        prop_assert!((b.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn walk2vec_invariant_when_landmarks_unique(
        n in 20usize..200, p in 0.03f64..0.3, seed in any::<u64>(), metric in metric_strategy()
    ) {
        let (g, _, h) = graph_and_perm(n, p, seed);
        let (eg, lg) = embed_walk2vec_with_landmarks(&g, 15, metric).unwrap();
        let (eh, lh) = embed_walk2vec_with_landmarks(&h, 15, metric).unwrap();
        prop_assert_eq!(eg.values.len(), 480);
        if lg.unique && lh.unique {
            prop_assert!(common::max_abs_diff(&eg.values, &eh.values) <= 1e-10);
        }
    }

    #[test]
    fn stationary_distribution_is_fixed(n in 5usize..80, p in 0.05f64..0.5, seed in any::<u64>()) {
        let g = gen_er(n, dense_enough(n, p), Seed(seed)).unwrap();
        let omega = stationary_distribution(&g).unwrap();
        let next = transition_step(&g, &omega).unwrap();
        prop_assert!(common::max_abs_diff(&omega, &next) <= 1e-14);
    }

    #[test]
    fn generators_are_deterministic(n in 4usize..80, p in 0.05f64..0.9, seed in any::<u64>()) {
        let p = dense_enough(n, p);
        prop_assert_eq!(gen_er(n, p, Seed(seed)).unwrap(), gen_er(n, p, Seed(seed)).unwrap());
        // equal block probabilities reduce the SBM to ER exactly
        prop_assert_eq!(gen_sbm(n, p, p, Seed(seed)).unwrap(), gen_er(n, p, Seed(seed)).unwrap());
    }

    #[test]
    fn auc_symmetries(scores in prop::collection::vec(-5i32..5, 2..80), seed in any::<u64>()) {
        let mut rng = Stream::new(Seed(seed), 1);
        let mut labels: Vec<u8> = (0..scores.len()).map(|_| rng.bernoulli(0.5) as u8).collect();
        labels[0] = 0;
        labels[1] = 1;
        let s: Vec<f64> = scores.iter().map(|&v| v as f64).collect();
        let a = auc(&s, &labels).unwrap();
        prop_assert!((0.0..=1.0).contains(&a));
        let monotone: Vec<f64> = s.iter().map(|v| (v * 0.3).exp()).collect();
        prop_assert_eq!(auc(&monotone, &labels).unwrap(), a);
        let negated: Vec<f64> = s.iter().map(|v| -v).collect();
        prop_assert!((auc(&negated, &labels).unwrap() - (1.0 - a)).abs() <= 1e-15);
        let flipped: Vec<u8> = labels.iter().map(|l| 1 - l).collect();
        prop_assert!((auc(&s, &flipped).unwrap() - (1.0 - a)).abs() <= 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sc_embedding_is_permutation_invariant(
        n in 20usize..120, p in 0.05f64..0.3, seed in any::<u64>(), max_pool in any::<bool>()
    ) {
        let (g, _, h) = graph_and_perm(n, p, seed);
        let tau = 6;
        let feats = node_delta_features(&g, tau, Metric::Distance).unwrap();
        let corpus: Vec<&[f64]> = feats.iter().map(|f| f.values()).collect();
        let cfg = DictLearnConfig { atoms: 12, lambda1: 0.15, epochs: 2, batch_size: 32 };
        let dict = dict_learn(&corpus, &cfg, Seed(seed)).unwrap();
        let mode = if max_pool { PoolingMode::Max } else { PoolingMode::Average };
        let a = embed_sc(&g, &dict, tau, mode, Metric::Distance).unwrap();
        let b = embed_sc(&h, &dict, tau, mode, Metric::Distance).unwrap();
        prop_assert_eq!(a.values.len(), 12);
        prop_assert!(common::max_abs_diff(&a.values, &b.values) <= 1e-8);
    }
}

use walk2vec_core::generators::{gen_er, gen_planted_clique_with_members, gen_sbm_with_blocks, sbm_params_from};
use walk2vec_core::Seed;

fn within_sigmas(observed: f64, trials: f64, p: f64, sigmas: f64) -> bool {
    let mean = trials * p;
    let sd = (trials * p * (1.0 - p)).sqrt();
    (observed - mean).abs() <= sigmas * sd
}

#[test]
fn er_edge_density() {
    let (n, p) = (300, 0.05);
    let pairs = (n * (n - 1) / 2) as f64;
    let mut total = 0.0;
    for s in 0..20 {
        total += gen_er(n, p, Seed(s)).unwrap().edge_count() as f64;
    }
    assert!(within_sigmas(total, 20.0 * pairs, p, 5.0), "{total}");
}

#[test]
fn sbm_block_densities() {
    let (p_in, p_out) = sbm_params_from(0.1, 0.08).unwrap();
    let n = 301;
    let (g, blocks) = gen_sbm_with_blocks(n, p_in, p_out, Seed(9)).unwrap();
    let size0 = blocks.iter().filter(|&&b| b == 0).count();
    assert_eq!(size0, 151);
    let (mut inside, mut across) = (0.0, 0.0);
    for (i, j) in g.edges() {
        if blocks[i] == blocks[j] {
            inside += 1.0;
        } else {
            across += 1.0;
        }
    }
    let in_pairs = (151 * 150 / 2 + 150 * 149 / 2) as f64;
    let out_pairs = (151 * 150) as f64;
    assert!(within_sigmas(inside, in_pairs, p_in, 5.0));
    assert!(within_sigmas(across, out_pairs, p_out, 5.0));
}

#[test]
fn planted_clique_is_complete_and_background_matches() {
    let (n, p, k) = (200, 0.3, 25);
    let (g, members) = gen_planted_clique_with_members(n, p, k, Seed(4)).unwrap();
    assert_eq!(members.len(), k);
    for (a, &i) in members.iter().enumerate() {
        for &j in &members[a + 1..] {
            assert!(g.has_edge(i, j));
        }
    }
    let base = gen_er(n, p, Seed(4)).unwrap();
    for (i, j) in g.edges() {
        let both = members.binary_search(&i).is_ok() && members.binary_search(&j).is_ok();
        assert!(both || base.has_edge(i, j));
    }
}

#[test]
fn every_node_has_a_neighbor() {
    for s in 0..30 {
        let g = gen_er(100, 0.03, Seed(s)).unwrap();
        assert!(g.min_degree() >= 1);
    }
}

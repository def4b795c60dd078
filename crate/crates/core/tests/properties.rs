use proptest::prelude::*;
use rand::Rng;

use tensor_chromatic::constructors::{generic_rank_r_tensor, graph_to_tensor, Graph};
use tensor_chromatic::invariants::{chromatic, relative_chromatic, Limits, TrialConfig};
use tensor_chromatic::oracles::{graph_chromatic_oracle, matroid_characteristic_oracle, reduced_chromatic_polynomial};
use tensor_chromatic::rng::{stream_rng, Purpose, StreamKey};
use tensor_chromatic::tensor::Tensor;

fn graph_strategy() -> impl Strategy<Value = Graph> {
    (2usize..=6, 0usize..=6, any::<u64>()).prop_map(|(v, extra, seed)| {
        let mut rng = stream_rng(seed, StreamKey::new(Purpose::TensorSample, 77, 0));
        Graph::random_connected(v, v - 1 + extra, &mut rng)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn deletion_contraction_matches_whitney_sum(g in graph_strategy()) {
        prop_assert_eq!(graph_chromatic_oracle(&g).unwrap(), matroid_characteristic_oracle(&g.signed_incidence()).unwrap());
    }

    #[test]
    fn reduced_chromatic_coefficients_alternate(g in graph_strategy()) {
        let p = reduced_chromatic_polynomial(&g).unwrap();
        let top = p.len() - 1;
        prop_assert_eq!(p[top], 1);
        for (i, &c) in p.iter().enumerate() {
            let expected = if (top - i) % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(c.signum(), expected);
        }
    }

    #[test]
    fn edge_order_and_orientation_do_not_matter(g in graph_strategy(), seed in any::<u64>()) {
        let mut rng = stream_rng(seed, StreamKey::new(Purpose::TensorSample, 78, 0));
        let mut edges = g.edges().to_vec();
        for e in edges.iter_mut() {
            if rng.gen_bool(0.5) {
                *e = (e.1, e.0);
            }
        }
        for i in (1..edges.len()).rev() {
            edges.swap(i, rng.gen_range(0..=i));
        }
        let h = Graph::new(g.vertex_count(), edges).unwrap();
        prop_assert_eq!(graph_chromatic_oracle(&g).unwrap(), graph_chromatic_oracle(&h).unwrap());
    }
}

fn random_diagonal_space(n: usize, a: usize, rng: &mut impl Rng) -> Tensor {
    loop {
        let slices: Vec<Vec<i64>> = (0..a)
            .map(|_| {
                let mut s = vec![0i64; n * n];
                for i in 0..n {
                    s[i * n + i] = rng.gen_range(-9..=9);
                }
                s
            })
            .collect();
        // a diagonal position vanishing on every slice makes det identically 0
        let invertible = (0..n).all(|i| slices.iter().any(|s: &Vec<i64>| s[i * n + i] != 0));
        if let (true, Ok(t)) = (invertible, Tensor::new(n, slices.clone())) {
            if t.contraction_dim() == a {
                return t;
            }
        }
    }
}

#[test]
fn leading_coefficient_is_one() {
    let mut rng = stream_rng(21, StreamKey::new(Purpose::TensorSample, 1, 0));
    let cfg = TrialConfig::with_seed(21);
    for i in 0..12 {
        let (n, a) = (rng.gen_range(2..=4), rng.gen_range(1..=4));
        let r = rng.gen_range(a.max(n)..=6);
        let t = generic_rank_r_tensor(a, n, r, i).unwrap();
        assert_eq!(chromatic(&t, &cfg).unwrap().m[0], 1, "n={n} a={a} r={r}");
    }
}

#[test]
fn diagonal_spaces_have_equal_polynomials() {
    let mut rng = stream_rng(22, StreamKey::new(Purpose::TensorSample, 2, 0));
    let cfg = TrialConfig { limits: Limits { n_max: 6, ..Limits::default() }, ..TrialConfig::with_seed(22) };
    for _ in 0..8 {
        let n = rng.gen_range(2..=5);
        let a = rng.gen_range(1..=n.min(4));
        let t = random_diagonal_space(n, a, &mut rng);
        let chi = chromatic(&t, &cfg).unwrap();
        let rel = relative_chromatic(&t, &cfg).unwrap();
        assert_eq!(chi.m, rel.m, "{t:?}");
        assert_eq!(chi.m[0], 1);
    }
}

#[test]
fn random_graphs_match_the_oracle() {
    let mut rng = stream_rng(23, StreamKey::new(Purpose::TensorSample, 3, 0));
    let cfg = TrialConfig { limits: Limits { n_max: 10, ..Limits::default() }, ..TrialConfig::with_seed(23) };
    for _ in 0..6 {
        let v = rng.gen_range(2..=5);
        let e = rng.gen_range(v - 1..=7);
        let g = Graph::random_connected(v, e, &mut rng);
        let t = graph_to_tensor(&g).unwrap();
        assert_eq!(chromatic(&t, &cfg).unwrap().m, graph_chromatic_oracle(&g).unwrap(), "{g:?}");
    }
}

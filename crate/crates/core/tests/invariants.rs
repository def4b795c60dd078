use tensor_chromatic::constructors::*;
use tensor_chromatic::invariants::*;
use tensor_chromatic::oracles::graph_chromatic_oracle;
use tensor_chromatic::tensor::{Tensor, TensorError};

fn cfg(seed: u64) -> TrialConfig {
    TrialConfig::with_seed(seed)
}

fn with(formulation: Formulation, seed: u64) -> TrialConfig {
    TrialConfig { formulation, limits: Limits { n_max: 10, ..Limits::default() }, ..TrialConfig::with_seed(seed) }
}

fn charnum(t: &Tensor, b: &[usize], c: &TrialConfig) -> u64 {
    characteristic_number(t, &BVector::new(b.to_vec()), c).unwrap().value
}

#[test]
fn concentration_model_counts() {
    let t = concentration_model();
    let chi = chromatic(&t, &cfg(1)).unwrap();
    let rel = relative_chromatic(&t, &cfg(1)).unwrap();
    assert_eq!(chi.m, vec![1, 2, 4, 4, 2]);
    assert_eq!(rel.m, vec![1, 2, 4, 4, 2]);
    assert_eq!(chi.binomial_form, vec![1, 8, 24, 16, 2]);
    assert_eq!(chi.d, 4);
    assert_eq!(euler_complement(&t, &cfg(1)).unwrap().complement, 1);
}

#[test]
fn block_space_counts_and_euler() {
    let t = block_space();
    let e = euler_complement(&t, &cfg(2)).unwrap();
    assert_eq!(e.relative.m, vec![1, 2, 2, 1]);
    assert_eq!((e.complement, e.hypersurface), (0, 4));
    assert_eq!(chromatic(&t, &cfg(2)).unwrap().m, vec![1, 2, 2, 1]);
    assert_eq!(chromatic(&t, &cfg(2)).unwrap().render(), "a^3 + 2*3*a^2*b + 2*3*a*b^2 + b^3");
}

#[test]
fn trivial_spaces() {
    let id = identity_space(3);
    assert_eq!(chromatic(&id, &cfg(3)).unwrap().m, vec![1]);
    let e = euler_complement(&id, &cfg(3)).unwrap();
    assert_eq!((e.complement, e.hypersurface), (1, 0));
    let single_edge = graph_to_tensor(&Graph::new(2, vec![(0, 1)]).unwrap()).unwrap();
    assert_eq!(chromatic(&single_edge, &cfg(3)).unwrap().m, vec![1]);
    assert_eq!(relative_chromatic(&single_edge, &cfg(3)).unwrap().m, vec![1]);
}

#[test]
fn triangle_is_a_line_minus_three_points() {
    let t = graph_to_tensor(&Graph::complete(3)).unwrap();
    assert_eq!(chromatic(&t, &cfg(4)).unwrap().m, vec![1, 2]);
    let e = euler_complement(&t, &cfg(4)).unwrap();
    assert_eq!((e.complement, e.hypersurface), (-1, 3));
}

#[test]
fn cycle_characteristic_number() {
    let t = graph_to_tensor(&Graph::cycle(6)).unwrap();
    assert_eq!(charnum(&t, &[2, 0, 0, 0, 2], &cfg(5)), 10);
    assert_eq!(charnum(&t, &[4, 0, 0, 0, 0], &cfg(5)), 1);
}

#[test]
fn quadric_family_extremes() {
    let t = cyclic_quadric_family();
    assert_eq!(charnum(&t, &[7, 0, 0], &cfg(6)), 1);
    assert_eq!(charnum(&t, &[0, 0, 7], &cfg(6)), 9);
    assert_eq!(top_chromatic_coefficient(&t, &cfg(6)).unwrap().value, 9);
}

#[test]
fn middle_minor_conditions_match_mixed_volumes() {
    // full diagonal spaces: counts are torus solution counts of generic
    // systems supported on hypersimplices, i.e. their mixed volumes
    let d4 = diagonal_space(4);
    for (b, mv) in [([0, 3, 0], 4), ([1, 1, 1], 6), ([1, 2, 0], 4), ([0, 2, 1], 4), ([2, 1, 0], 2), ([1, 0, 2], 3)] {
        assert_eq!(charnum(&d4, &b, &cfg(7)), mv, "b = {b:?}");
    }
    let d5 = diagonal_space(5);
    for (b, mv) in [([1, 1, 1, 1], 24), ([0, 2, 2, 0], 16), ([1, 2, 1, 0], 12)] {
        assert_eq!(charnum(&d5, &b, &cfg(7)), mv, "b = {b:?}");
    }
}

#[test]
fn formulations_agree() {
    let mut cases = vec![concentration_model(), block_space(), graph_to_tensor(&Graph::complete(4)).unwrap()];
    for (a, n, r, seed) in [(4, 3, 4, 1), (5, 3, 5, 2), (3, 3, 3, 3), (3, 2, 3, 4), (4, 4, 4, 5)] {
        cases.push(generic_rank_r_tensor(a, n, r, seed).unwrap());
    }
    for (i, t) in cases.iter().enumerate() {
        let minors = with(Formulation::Minors, 8);
        let inverse = with(Formulation::Inverse, 8);
        assert_eq!(chromatic(t, &minors).unwrap().m, chromatic(t, &inverse).unwrap().m, "case {i}");
        assert_eq!(relative_chromatic(t, &minors).unwrap().m, relative_chromatic(t, &inverse).unwrap().m, "case {i}");
    }
}

#[test]
fn forced_inverse_rejects_middle_conditions() {
    let err = characteristic_number(&diagonal_space(4), &BVector::new(vec![1, 1, 1]), &with(Formulation::Inverse, 1));
    assert!(matches!(err, Err(InvariantError::BadConfig(_))));
}

#[test]
fn generic_restrictions_give_prefixes() {
    let t = generic_rank_r_tensor(5, 3, 5, 9).unwrap();
    let full = chromatic(&t, &cfg(9)).unwrap().m;
    assert_eq!(full, vec![1, 2, 4, 8, 10]);
    let mut rng = tensor_chromatic::rng::stream_rng(9, tensor_chromatic::rng::StreamKey::new(tensor_chromatic::rng::Purpose::Restriction, 0, 0));
    for slices in 1..5 {
        let sub = generic_restriction(&t, slices, &mut rng).unwrap();
        assert_eq!(chromatic(&sub, &cfg(9)).unwrap().m, full[..slices].to_vec());
    }
}

#[test]
fn graph_engine_matches_oracle_on_small_graphs() {
    let graphs = [
        Graph::complete(4),
        Graph::cycle(5),
        Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap(),
        Graph::new(5, vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap(),
    ];
    for g in &graphs {
        let t = graph_to_tensor(g).unwrap();
        let oracle = graph_chromatic_oracle(g).unwrap();
        assert_eq!(chromatic(&t, &cfg(10)).unwrap().m, oracle, "{g:?}");
        assert_eq!(relative_chromatic(&t, &cfg(10)).unwrap().m, oracle, "{g:?}");
    }
}

#[test]
fn reports_are_deterministic_and_echo_primes() {
    let t = block_space();
    let a = chromatic(&t, &cfg(11)).unwrap();
    let b = chromatic(&t, &cfg(11)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.primes.len(), a.trials_used);
    assert!(a.trials_used >= 3 * a.m.len());
    let c = chromatic(&t, &cfg(12)).unwrap();
    assert_eq!(c.m, a.m);
    assert_ne!(c.primes, a.primes);
}

#[test]
fn thirty_bit_primes() {
    let c = TrialConfig { prime_bits: 30, ..cfg(13) };
    let r = chromatic(&concentration_model(), &c).unwrap();
    assert_eq!(r.m, vec![1, 2, 4, 4, 2]);
    assert!(r.primes.iter().all(|p| p.value() < 1 << 30));
}

#[test]
fn error_paths() {
    // every member has rank one, below n - 2
    let thin = Tensor::new(4, vec![{
        let mut s = vec![0; 16];
        s[0] = 1;
        s
    }])
    .unwrap();
    assert!(matches!(chromatic(&thin, &cfg(1)), Err(InvariantError::Precondition(_))));

    let small = Limits { n_max: 3, ..Limits::default() };
    let limited = TrialConfig { limits: small, ..cfg(1) };
    assert!(matches!(
        chromatic(&cyclic_quadric_family(), &limited),
        Err(InvariantError::LimitExceeded { what: "n", value: 4, limit: 3 })
    ));
    let shallow = TrialConfig { limits: Limits { d_max: 2, ..Limits::default() }, ..cfg(1) };
    assert!(matches!(chromatic(&block_space(), &shallow), Err(InvariantError::LimitExceeded { what: "d", .. })));

    let bad_b = characteristic_number(&block_space(), &BVector::new(vec![1, 1]), &cfg(1));
    assert!(matches!(bad_b, Err(InvariantError::BadConditions(_))));
    let bad_cfg = TrialConfig { trials: 5, max_trials: 4, ..cfg(1) };
    assert!(matches!(chromatic(&block_space(), &bad_cfg), Err(InvariantError::BadConfig(_))));
    assert_eq!(Tensor::new(2, vec![vec![0; 4]]), Err(TensorError::EmptyContraction));
}

#[test]
fn singular_spaces_have_no_invertible_points() {
    // skew-symmetric 3x3 matrices: determinant vanishes identically
    let skew = Tensor::new(
        3,
        vec![vec![0, 1, 0, -1, 0, 0, 0, 0, 0], vec![0, 0, 1, 0, 0, 0, -1, 0, 0], vec![0, 0, 0, 0, 0, 1, 0, -1, 0]],
    )
    .unwrap();
    for f in [Formulation::Minors, Formulation::Inverse] {
        assert_eq!(chromatic(&skew, &with(f, 1)).unwrap().m, vec![0, 0, 0]);
    }
}

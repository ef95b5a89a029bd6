use ihp_core::bitcube::{tilde_spectrum, wht_forward, wht_inverse};
use ihp_core::dihp::{
    component_growing_distinguisher, exact_tvd, gen_instance, run_protocol, Case, CaseMode, DiscreteDistribution, Forest, Insert,
};
use ihp_core::logmath::{ln_binom, log_sum_exp, log_sum_range};
use ihp_core::matchings::{q_match_b, sample_matching};
use ihp_core::maxcut::{cut_value, maxcut_exact, maxcut_local, reduce_to_graph, MultiGraph};
use ihp_core::{rng, CubeFunction};
use proptest::prelude::*;

fn cube_values() -> impl Strategy<Value = (u32, Vec<f64>)> {
    (1u32..=10).prop_flat_map(|n| (Just(n), prop::collection::vec(-1.0f64..1.0, 1usize << n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parseval_and_roundtrip((n, values) in cube_values()) {
        let f = CubeFunction::new(n, values).unwrap();
        let hat = wht_forward(&f).unwrap();
        let energy: f64 = hat.coeffs().iter().map(|c| c * c).sum();
        let mean_sq = f.values().iter().map(|x| x * x).sum::<f64>() / f.values().len() as f64;
        prop_assert!((energy - mean_sq).abs() <= 1e-12);
        let back = wht_inverse(&hat).unwrap();
        for (a, b) in back.values().iter().zip(f.values()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn tilde_is_a_sign_average(n in 1u32..=10, seed: u64, density in 0.05f64..1.0) {
        let mut r = rng::stream(seed, 0);
        use rand::Rng;
        let mut members: Vec<u64> = (0..1u64 << n).filter(|_| r.gen_bool(density)).collect();
        if members.is_empty() {
            members.push(0);
        }
        let t = tilde_spectrum(&CubeFunction::indicator(n, members.iter().copied()).unwrap()).unwrap();
        prop_assert!((t.get(0) - 1.0).abs() < 1e-12);
        prop_assert!(t.coeffs().iter().all(|c| c.abs() <= 1.0 + 1e-12));
    }

    #[test]
    fn boundary_distribution_is_normalized(n in 2u32..400, frac_m in 0.0f64..1.0, frac_k in 0.0f64..1.0) {
        let m = ((n / 2) as f64 * frac_m) as u32;
        let k = ((n / 2) as f64 * frac_k) as u32;
        let terms: Vec<f64> = (0..=k)
            .flat_map(|i| (0..=2 * (k - i)).map(move |b| (i, b)))
            .map(|(i, b)| q_match_b(k as f64, i as f64, b as f64, n as f64, m as f64).unwrap().ln())
            .collect();
        prop_assert!(log_sum_exp(&terms).abs() < 1e-9);
    }

    #[test]
    fn sampled_matchings_are_valid(n in 2u32..200, frac in 0.0f64..1.0, seed: u64) {
        let size = ((n / 2) as f64 * frac) as u32;
        let m = sample_matching(n, size, &mut rng::stream(seed, 1)).unwrap();
        prop_assert_eq!(m.len(), size as usize);
        let mut seen = vec![false; n as usize];
        for &(a, b) in m.edges() {
            prop_assert!(a != b && a < n && b < n);
            prop_assert!(!seen[a as usize] && !seen[b as usize]);
            seen[a as usize] = true;
            seen[b as usize] = true;
        }
    }

    #[test]
    fn range_sum_matches_direct_sum(n in 10.0f64..5000.0, lo_frac in 0.0f64..0.5, hi_frac in 0.5f64..1.0) {
        let (lo, hi) = ((n * lo_frac).floor(), (n * hi_frac).floor());
        let direct: Vec<f64> = (lo as u64..=hi as u64).map(|k| ln_binom(n.floor(), k as f64)).collect();
        let got = log_sum_range(lo, hi, |k| ln_binom(n.floor(), k));
        prop_assert!((got.value - log_sum_exp(&direct)).abs() < 1e-10);
    }

    #[test]
    fn max_cut_bounds(n in 2u32..=14, raw in prop::collection::vec((0u32..14, 0u32..14, 1u32..4), 1..40), seed: u64) {
        let edges: Vec<_> = raw.into_iter().map(|(a, b, w)| (a % n, b % n, w)).filter(|(a, b, _)| a != b).collect();
        prop_assume!(!edges.is_empty());
        let g = MultiGraph::new(n, edges).unwrap();
        let best = maxcut_exact(&g).unwrap();
        prop_assert_eq!(cut_value(&g, &best.side), best.value);
        prop_assert!(2 * best.value >= g.m() && best.value <= g.m());
        let local = maxcut_local(&g, 4, &mut rng::stream(seed, 2));
        prop_assert!(local.value <= best.value && 2 * local.value >= g.m());
        if g.bipartition().is_some() {
            prop_assert_eq!(best.value, g.m());
        }
    }

    #[test]
    fn tvd_is_a_metric(p in prop::collection::vec(0.01f64..1.0, 2..8), q in prop::collection::vec(0.01f64..1.0, 2..8)) {
        let norm = |w: &[f64]| {
            let s: f64 = w.iter().sum();
            DiscreteDistribution::new(w.iter().enumerate().map(|(k, x)| (k, x / s))).unwrap()
        };
        let (a, b) = (norm(&p), norm(&q));
        let d = exact_tvd(&a, &b);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&d));
        prop_assert!((d - exact_tvd(&b, &a)).abs() < 1e-15);
        let merged = |x: &DiscreteDistribution<usize>| x.push_forward(|k| k / 2);
        prop_assert!(exact_tvd(&merged(&a), &merged(&b)) <= d + 1e-12);
    }
}

#[test]
fn yes_reductions_are_bipartite_and_cut_fully() {
    for i in 0..200 {
        let mut r = rng::stream(11, i);
        let inst = gen_instance(22, 4, 8, CaseMode::Yes, &mut r).unwrap();
        let g = reduce_to_graph(&inst);
        let side = inst.hidden.clone().unwrap();
        assert_eq!(cut_value(&g, &side), g.m());
        assert_eq!(maxcut_exact(&g).unwrap().value, g.m());
    }
}

#[test]
fn distinguisher_never_errs_on_yes_and_certifies_no() {
    let p = component_growing_distinguisher(6);
    for i in 0..500 {
        let mut r = rng::stream(12, i);
        let inst = gen_instance(40, 8, 10, CaseMode::Mixed, &mut r).unwrap();
        let t = run_protocol(&p, &inst, &mut r).unwrap();
        if inst.case == Case::Yes {
            assert_eq!(t.output, Case::Yes);
        }
        if t.output == Case::No {
            assert_eq!(inst.case, Case::No);
        }
        assert!(t.messages.iter().all(|m| m.charged() <= 6));
    }
}

#[test]
fn forest_labels_are_path_parities() {
    let mut r = rng::stream(13, 0);
    use rand::Rng;
    let n = 30;
    let x: Vec<bool> = (0..n).map(|_| r.gen()).collect();
    let mut f = Forest::new(n);
    for _ in 0..200 {
        let (a, b) = (r.gen_range(0..n), r.gen_range(0..n));
        if a == b {
            continue;
        }
        let w = x[a as usize] != x[b as usize];
        if let Insert::Cycle { label_sum } = f.insert(a, b, w) {
            // Consistent labels never close an odd cycle.
            assert!(!label_sum);
        }
    }
    assert_eq!(f.potential(), f.potential_from_scratch());
}

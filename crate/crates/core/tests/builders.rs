mod common;

use proptest::prelude::*;
use rand::Rng;

use ist_forge::build::{Algo, BuildFailure, FailStage};
use ist_forge::dense::build_dense;
use ist_forge::generators::{gen_gnp, gen_random_regular};
use ist_forge::ist::verify_independent;
use ist_forge::pseudo::{
    build_pseudorandom, crossing_spot_check, mixing_audit, spectral_profile, PseudoParams,
    CONNECTION_CHECKED, PARTITION_CHECKED,
};
use ist_forge::sparse::{build_sparse, grow_path_system, SparseParams};
use ist_forge::{Graph, SeededRng};

fn small_pseudo_params() -> PseudoParams {
    serde_json::from_str(
        r#"{"setProbability": 0.02, "reservoirProbability": 0.3, "setSizeCap": 20,
            "reservoirDegree": 1, "maxResampleRounds": 300, "resampleRadius": 1,
            "indexRule": "definition", "spectralDiagnostics": false, "growthBudget": 100}"#,
    )
    .unwrap()
}

/// Success must verify; failure must carry a certificate that re-validates.
fn check_outcome(g: &Graph, result: Result<ist_forge::build::BuildOutcome, BuildFailure>) -> bool {
    match result {
        Ok(out) => {
            let fam = out.assemble(g).expect("successful build assembles");
            let report = verify_independent(g, &fam);
            assert!(report.passed(), "{:?}", report.violation);
            assert!(common::brute_independent(g, &fam) || g.n() > 40);
            true
        }
        Err(e) => {
            assert!(e.validate(g), "certificate for {e} does not re-validate");
            false
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn every_builder_is_sound(n in 2usize..=40, p in 0.1f64..1.0, seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let g = gen_gnp(n, p, &mut rng).unwrap();
        let r = rng.random_range(0..n);
        let k = rng.random_range(0..=g.min_degree());
        for algo in [Algo::Dense, Algo::Sparse, Algo::Pseudo] {
            let result = algo.build(&g, r, k, &SparseParams::default(), &small_pseudo_params(), &mut rng.fork(7));
            check_outcome(&g, result);
        }
    }
}

#[test]
fn dense_is_deterministic() {
    let g = gen_gnp(200, 0.4, &mut SeededRng::new(3)).unwrap();
    let k = g.min_degree();
    let a = build_dense(&g, 17, k).unwrap();
    let b = build_dense(&g, 17, k).unwrap();
    assert_eq!(a.collection, b.collection);
    assert_eq!(a.witness, b.witness);
    assert!(check_outcome(&g, Ok(a)));
}

#[test]
fn dense_reports_deficient_vertices_without_failing_outright() {
    // Vertex 5 sees none of the root's first two neighbors and only one
    // vertex outside them.
    let g = Graph::from_edges(6, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (1, 4), (2, 4)]).unwrap();
    let result = build_dense(&g, 0, 2);
    match &result {
        Ok(out) => assert!(out.diagnostics.iter().any(|d| d.contains("vertices"))),
        Err(e) => assert_eq!(e.stage(), FailStage::Niceness),
    }
    check_outcome(&g, result);
}

#[test]
fn path_systems_validate_or_certify() {
    let mut rng = SeededRng::new(8);
    let (mut ok, mut failed) = (0, 0);
    for _ in 0..200 {
        let n = rng.random_range(10..80);
        let g = gen_gnp(n, rng.random_range(0.05..0.5), &mut rng).unwrap();
        let r = rng.random_range(0..n);
        let k = g.degree(r).min(rng.random_range(1..6));
        let starts = g.neighbors(r)[..k].to_vec();
        let forbidden = vec![r];
        let len = rng.random_range(0..8);
        match grow_path_system(&g, &starts, len, &forbidden) {
            Ok(sys) => {
                sys.validate(&g, &starts, len, &forbidden).unwrap();
                ok += 1;
            }
            Err(f) => {
                assert!(f.validate(&g));
                failed += 1;
            }
        }
    }
    assert!(ok > 20 && failed > 20, "{ok} grown / {failed} failed");
}

#[test]
fn sparse_builds_on_moderate_graphs() {
    let n = 2000;
    let p = 30.0 * (n as f64).ln() / n as f64;
    let params = SparseParams::default();
    let mut built = 0;
    for seed in 0..3 {
        let g = gen_gnp(n, p, &mut SeededRng::new(seed)).unwrap();
        let delta = g.min_degree();
        built += check_outcome(&g, build_sparse(&g, 0, delta * 4 / 5, &params)) as usize;
        // The full target may fail at this size, but only with a certificate.
        check_outcome(&g, build_sparse(&g, 0, delta, &params));
    }
    assert_eq!(built, 3);
}

#[test]
fn sparse_k_above_root_degree_is_q_selection() {
    let g = Graph::cycle(8);
    let e = build_sparse(&g, 0, 3, &SparseParams::default()).unwrap_err();
    assert_eq!(e.stage(), FailStage::QSelection);
    assert!(e.validate(&g));
}

#[test]
fn pseudorandom_successes_pass_their_validators() {
    let params = small_pseudo_params();
    let mut built = 0;
    for seed in 0..8 {
        let g = gen_random_regular(300, 30, &mut SeededRng::new(seed)).unwrap();
        let result = build_pseudorandom(&g, 0, 6, &params, &mut SeededRng::new(100 + seed));
        if let Ok(out) = &result {
            assert!(out.diagnostics.iter().any(|d| d == PARTITION_CHECKED));
            assert!(out.diagnostics.iter().any(|d| d == CONNECTION_CHECKED));
        }
        built += check_outcome(&g, result) as usize;
    }
    assert!(built >= 6, "only {built} / 8 pseudorandom builds succeeded");
}

#[test]
fn pseudorandom_formula_defaults_fail_with_certificate() {
    let g = gen_random_regular(200, 20, &mut SeededRng::new(1)).unwrap();
    let params = PseudoParams { spectral_diagnostics: false, ..Default::default() };
    let e = build_pseudorandom(&g, 0, 18, &params, &mut SeededRng::new(1)).unwrap_err();
    assert_eq!(e.stage(), FailStage::Partition);
    assert!(e.validate(&g));
}

#[test]
fn mixing_holds_with_exact_lambda() {
    let mut rng = SeededRng::new(12);
    for _ in 0..3 {
        let g = gen_random_regular(200, 12, &mut rng).unwrap();
        let s = spectral_profile(&g);
        let audit = mixing_audit(&g, s.lambda, 2000, &mut rng);
        assert_eq!(audit.violations, 0, "{audit:?}");
        // Sets larger than lambda n / d always see an edge between them.
        assert_eq!(crossing_spot_check(&g, s.lambda, 100, &mut rng), 0);
    }
}

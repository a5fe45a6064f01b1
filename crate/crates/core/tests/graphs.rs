mod common;

use proptest::prelude::*;

use ist_forge::connectivity::{is_k_connected, vertex_connectivity};
use ist_forge::edge_list::{read_edge_list_from, write_edge_list_to};
use ist_forge::generators::{gen_bipartite_gnp, gen_gnp, gen_random_regular};
use ist_forge::graph::{low_degree_set, low_degree_threshold};
use ist_forge::{Graph, SeededRng};

fn serialize(g: &Graph) -> Vec<u8> {
    let mut buf = Vec::new();
    write_edge_list_to(g, &mut buf).unwrap();
    buf
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gnp_is_deterministic_and_consistent(n in 0usize..120, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let a = gen_gnp(n, p, &mut SeededRng::new(seed)).unwrap();
        let b = gen_gnp(n, p, &mut SeededRng::new(seed)).unwrap();
        prop_assert_eq!(serialize(&a), serialize(&b));
        prop_assert!(a.check_invariants().is_ok());
        let degree_sum: usize = (0..n).map(|v| a.degree(v)).sum();
        prop_assert_eq!(degree_sum, 2 * a.m());
    }

    #[test]
    fn regular_graphs_are_regular(half in 3usize..40, d in 1usize..6, seed in any::<u64>()) {
        let n = 2 * half;
        let a = gen_random_regular(n, d, &mut SeededRng::new(seed)).unwrap();
        let b = gen_random_regular(n, d, &mut SeededRng::new(seed)).unwrap();
        prop_assert_eq!(serialize(&a), serialize(&b));
        prop_assert_eq!(a.regular_degree(), Some(d));
        prop_assert_eq!(a.m(), n * d / 2);
        prop_assert!(a.check_invariants().is_ok());
    }

    #[test]
    fn edge_list_roundtrip(n in 1usize..80, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let g = gen_gnp(n, p, &mut SeededRng::new(seed)).unwrap();
        let bytes = serialize(&g);
        let back = read_edge_list_from(&bytes[..]).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(serialize(&back), bytes);
    }
}

#[test]
fn connectivity_matches_cut_enumeration() {
    let mut rng = SeededRng::new(2024);
    for t in 0..200 {
        use rand::Rng;
        let n = rng.random_range(1..=9);
        let p = rng.random_range(0.2..1.0);
        let g = gen_gnp(n, p, &mut rng).unwrap();
        let kappa = common::brute_connectivity(&g);
        assert_eq!(vertex_connectivity(&g), kappa, "instance {t}: {g:?}");
        if kappa > 0 {
            assert!(is_k_connected(&g, kappa), "instance {t}");
        }
        assert!(!is_k_connected(&g, kappa + 1), "instance {t}");
    }
}

fn mean_within(counts: &[usize], expected: f64, variance: f64) -> (f64, f64) {
    let mean = counts.iter().sum::<usize>() as f64 / counts.len() as f64;
    let sigma = (variance / counts.len() as f64).sqrt();
    ((mean - expected).abs(), 4.0 * sigma)
}

#[test]
fn gnp_edge_count_mean() {
    let n = 1000;
    for p in [0.1, 0.5] {
        let counts: Vec<usize> = (0..50)
            .map(|s| gen_gnp(n, p, &mut SeededRng::new(s)).unwrap().m())
            .collect();
        let pairs = (n * (n - 1) / 2) as f64;
        let (dev, band) = mean_within(&counts, pairs * p, pairs * p * (1.0 - p));
        assert!(dev <= band, "p = {p}: deviation {dev} exceeds {band}");
    }
}

#[test]
fn bipartite_edge_count_mean() {
    let (a, b, p) = (300, 200, 0.2);
    let counts: Vec<usize> = (0..50)
        .map(|s| gen_bipartite_gnp(a, b, p, &mut SeededRng::new(s)).unwrap().edge_count())
        .collect();
    let cells = (a * b) as f64;
    let (dev, band) = mean_within(&counts, cells * p, cells * p * (1.0 - p));
    assert!(dev <= band, "deviation {dev} exceeds {band}");
}

#[test]
fn low_degree_set_is_usually_independent() {
    let n = 10_000;
    let p = 30.0 * (n as f64).ln() / n as f64;
    let threshold = low_degree_threshold(n, p, 0.9, false);
    let mut independent = 0;
    for seed in 0..100 {
        let g = gen_gnp(n, p, &mut SeededRng::new(seed)).unwrap();
        let s = low_degree_set(&g, threshold);
        let ok = s.iter().all(|&u| s.iter().all(|&v| !g.has_edge(u, v)));
        independent += ok as usize;
    }
    assert!(independent >= 95, "independent in {independent} / 100 seeds");
}

#[test]
fn regular_rejects_bad_parameters() {
    let mut rng = SeededRng::new(0);
    assert!(gen_random_regular(100, 101, &mut rng).is_err());
    assert!(gen_random_regular(7, 3, &mut rng).is_err());
    assert!(gen_gnp(10, 1.5, &mut rng).is_err());
}

mod common;

use proptest::prelude::*;
use rand::Rng;

use ist_forge::generators::{gen_bipartite_gnp, gen_gnp};
use ist_forge::graph::BipartiteGraph;
use ist_forge::matching::{disjoint_star_packing, max_matching, saturating_or_violator, Side};
use ist_forge::SeededRng;

fn small_bipartite() -> impl Strategy<Value = BipartiteGraph> {
    (0usize..=7, 0usize..=7, 0.0f64..=1.0, any::<u64>()).prop_map(|(a, b, p, seed)| {
        gen_bipartite_gnp(a, b, p, &mut SeededRng::new(seed)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn max_matching_is_optimal(b in small_bipartite()) {
        let m = max_matching(&b);
        prop_assert!(m.validate(&b).is_ok());
        prop_assert_eq!(m.len(), common::brute_matching(&b));
    }

    #[test]
    fn koenig_duality(b in small_bipartite()) {
        prop_assert_eq!(max_matching(&b).len(), common::brute_vertex_cover(&b));
    }

    #[test]
    fn saturating_or_violator_certificates(b in small_bipartite()) {
        let optimum = common::brute_matching(&b);
        for side in [Side::Left, Side::Right] {
            let size = if side == Side::Left { b.left() } else { b.right() };
            match saturating_or_violator(&b, side) {
                Ok(m) => {
                    prop_assert!(m.validate(&b).is_ok());
                    prop_assert!(m.saturates(&b, side));
                    prop_assert_eq!(optimum, size);
                }
                Err(v) => {
                    prop_assert!(v.validate(&b));
                    prop_assert!(v.neighborhood.len() < v.set.len());
                    prop_assert!(optimum < size);
                }
            }
        }
    }
}

#[test]
fn star_packing_agrees_with_exhaustive_search() {
    let mut rng = SeededRng::new(99);
    for t in 0..300 {
        let n = rng.random_range(4..=11);
        let g = gen_gnp(n, rng.random_range(0.2..0.9), &mut rng).unwrap();
        let centers_n = rng.random_range(1..=3.min(n - 1));
        let centers: Vec<usize> = (0..centers_n).collect();
        let pool: Vec<usize> = (centers_n..n).filter(|_| rng.random_bool(0.8)).collect();
        let star_size = rng.random_range(1..=3);
        let lists: Vec<Vec<usize>> = centers
            .iter()
            .flat_map(|&c| {
                let nb: Vec<usize> = g.neighbors(c).iter().copied().filter(|w| pool.contains(w)).collect();
                std::iter::repeat_n(nb, star_size)
            })
            .collect();
        let feasible = common::has_sdr(&lists);
        match disjoint_star_packing(&g, &centers, &pool, star_size) {
            Ok(stars) => {
                assert!(feasible, "instance {t}");
                let mut used = std::collections::HashSet::new();
                for (s, &c) in stars.iter().zip(&centers) {
                    assert_eq!(s.center, c);
                    assert_eq!(s.leaves.len(), star_size);
                    for &l in &s.leaves {
                        assert!(g.has_edge(c, l) && pool.contains(&l) && used.insert(l));
                    }
                }
            }
            Err(d) => {
                assert!(!feasible, "instance {t}");
                assert!(d.validate(&g, &pool, star_size), "instance {t}");
            }
        }
    }
}

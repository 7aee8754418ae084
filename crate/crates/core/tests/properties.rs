use heavymp_core::delta::{build_delta, contributing_sets, contributing_sets_with, Generation};
use heavymp_core::moments::{heavy_mp_moment, mp_moment};
use heavymp_core::paths::{
    canonicalize, classify, partition_to_path, path_to_partition, shorten, Path, PathClass,
};
use heavymp_core::simulation::{correlation_matrix, eigenvalues_sym, esd_histogram, Matrix};
use heavymp_core::Limits;
use proptest::prelude::*;

/// Arbitrary (not necessarily canonical) labelled paths.
fn raw_path(max_len: usize, labels: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1..=labels, 1..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn shortening_accounts_for_every_step(v in raw_path(14, 6)) {
        let path = canonicalize(&Path::new(v.clone()).unwrap());
        let ps = shorten(&path);
        prop_assert_eq!(path.len(), ps.shortened.len() + ps.runs + ps.simples);
        prop_assert_eq!(ps.simples, path.num_distinct() - ps.shortened.num_distinct());
        prop_assert!(ps.shortened.is_canonical());
        // the remainder is a fixpoint
        let again = shorten(&ps.shortened);
        prop_assert_eq!(&again.shortened, &ps.shortened);
        prop_assert_eq!((again.runs, again.simples), (0, 0));
        // relabelling does not matter
        let relabelled: Vec<u32> = v.iter().map(|x| 7 * x + 3).collect();
        prop_assert_eq!(shorten(&Path::new(relabelled).unwrap()), ps);
    }

    #[test]
    fn canonical_form_and_partitions(v in raw_path(12, 5)) {
        let c = canonicalize(&Path::new(v).unwrap());
        prop_assert_eq!(canonicalize(&c), c.clone());
        let s = path_to_partition(&c).unwrap();
        prop_assert_eq!(s.num_blocks(), c.num_distinct());
        prop_assert_eq!(partition_to_path(&s), c);
    }

    #[test]
    fn contributing_sets_are_even_trees(v in raw_path(12, 5)) {
        let reduced = shorten(&canonicalize(&Path::new(v).unwrap())).shortened;
        prop_assume!(!reduced.is_empty());
        prop_assert_eq!(classify(&reduced), PathClass::Irreducible);
        let r = reduced.num_distinct();
        let sets = contributing_sets(&reduced).unwrap();
        prop_assert!(sets.t_star() >= 1);
        prop_assert!(sets.t_star() <= reduced.len() - r + 1);
        for s in 1..=sets.t_star() {
            prop_assert!(!sets.level(s).is_empty());
            for t in sets.level(s) {
                let g = build_delta(&reduced, t).unwrap();
                prop_assert!(g.is_even() && g.is_tree_skeleton());
                prop_assert_eq!(t.num_distinct(), s);
                prop_assert_eq!(g.num_edges(), r + s - 1);
            }
        }
        if reduced.len() <= 9 {
            let brute = contributing_sets_with(&reduced, Generation::BruteForce, &Limits::default()).unwrap();
            prop_assert_eq!(brute, sets);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn heavy_moments_dominate_mp(alpha in 0.05f64..1.95, gamma in 0.05f64..3.0) {
        for k in 1..=7 {
            let mu = heavy_mp_moment(alpha, gamma, k).unwrap();
            let beta = mp_moment(gamma, k).unwrap();
            if k <= 3 {
                prop_assert_eq!(mu, beta);
            } else {
                prop_assert!(mu > beta, "k={} mu={} beta={}", k, mu, beta);
            }
        }
    }

    #[test]
    fn spectra_of_correlation_matrices(
        p in 1usize..24,
        n in 1usize..30,
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let data: Vec<f64> = (0..p * n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let x = Matrix::from_row_major(p, n, data).unwrap();
        let r = correlation_matrix(&x).unwrap();
        for i in 0..p {
            prop_assert_eq!(r.get(i, i), 1.0);
            for j in 0..i {
                prop_assert_eq!(r.get(i, j), r.get(j, i));
            }
        }
        let ev = eigenvalues_sym(&r).unwrap();
        prop_assert!(ev.windows(2).all(|w| w[0] <= w[1]));
        let sum: f64 = ev.iter().sum();
        let sum_sq: f64 = ev.iter().map(|x| x * x).sum();
        let fro = r.frobenius();
        prop_assert!((sum - p as f64).abs() <= 1e-10 * p as f64);
        prop_assert!((sum_sq - fro * fro).abs() <= 1e-10 * fro * fro);
        prop_assert!(ev[0] >= -1e-10 * ev[p - 1]);
        let h = esd_histogram(&ev, 7, 0.0, 2.0).unwrap();
        prop_assert_eq!(h.in_range() + h.below + h.above, p as u64);
    }
}

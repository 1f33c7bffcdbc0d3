use eigperturb::bounds::bound_report;
use eigperturb::eigenstructure::{char_poly, invariant_factors, rational_eigenvalues, summarize};
use eigperturb::exactpoly::{squarefree_decompose, GaussianRational, Poly};
use eigperturb::fuzz::{build_jordan, random_jordan_spec, random_unimodular, trial_rng};
use eigperturb::matfile::{format_matrix, parse_matrix};
use eigperturb::matrix::ExactMatrix;
use proptest::prelude::*;

fn gauss() -> impl Strategy<Value = GaussianRational> {
    (-6i64..=6, -3i64..=3, 1i64..=4).prop_map(|(re, im, den)| {
        &GaussianRational::from_ratio(re, den)
            + &(&GaussianRational::i() * &GaussianRational::from_int(im))
    })
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(gauss(), 0..6).prop_map(Poly::new)
}

fn int_matrix(n: usize) -> impl Strategy<Value = ExactMatrix> {
    prop::collection::vec(-3i64..=3, n * n).prop_map(move |v| {
        ExactMatrix::from_fn(n, n, |i, j| GaussianRational::from_int(v[i * n + j]))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn divmod_reconstructs(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.divmod(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.is_zero() || r.deg() < b.deg());
    }

    #[test]
    fn gcd_is_commutative_and_divides(a in poly(), b in poly()) {
        prop_assume!(!a.is_zero() || !b.is_zero());
        let g = Poly::gcd(&a, &b).unwrap();
        prop_assert_eq!(&g, &Poly::gcd(&b, &a).unwrap());
        prop_assert!(g.is_monic());
        prop_assert!(g.divides(&a).unwrap() && g.divides(&b).unwrap());
        prop_assert_eq!(Poly::gcd(&g, &g).unwrap(), g);
    }

    #[test]
    fn squarefree_decomposition_reconstructs(roots in prop::collection::vec((0usize..4, 1usize..4), 1..4)) {
        let pool = [
            GaussianRational::from_int(2),
            GaussianRational::from_ratio(-1, 3),
            GaussianRational::i(),
            GaussianRational::from_integers(1, -1),
        ];
        let mut p = Poly::one();
        for &(idx, k) in &roots {
            p = &p * &Poly::linear_power(&pool[idx], k);
        }
        let dec = squarefree_decompose(&p).unwrap();
        prop_assert_eq!(dec.reconstruct(), p.clone());
        let distinct: std::collections::BTreeSet<usize> = roots.iter().map(|r| r.0).collect();
        prop_assert_eq!(dec.distinct_roots(), distinct.len());
        prop_assert!(p.squarefree_part().unwrap().is_squarefree().unwrap());
    }

    #[test]
    fn matfile_round_trip(m in int_matrix(3), scale in gauss()) {
        let m = m.scale(&scale);
        prop_assert_eq!(parse_matrix(&format_matrix(&m)).unwrap(), m);
    }

    #[test]
    fn summary_identities(m in int_matrix(4)) {
        let s = summarize(&m).unwrap();
        prop_assert!(s.invariant_factors.is_divisibility_chain().unwrap());
        prop_assert_eq!(s.invariant_factors.product(), char_poly(&m).unwrap());
        prop_assert!(m.eval_poly(&s.min_poly).unwrap().is_zero());
        prop_assert_eq!(s.num_distinct + s.defectivity + s.derogatory_index, 4);
        prop_assert_eq!(s.min_poly.distinct_root_count().unwrap(), s.char_poly.distinct_root_count().unwrap());
    }

    #[test]
    fn algebraic_bounds_geometric(m in int_matrix(4)) {
        let (data, _) = rational_eigenvalues(&m).unwrap();
        for e in data {
            prop_assert!(1 <= e.geometric && e.geometric <= e.algebraic);
        }
    }

    #[test]
    fn similarity_invariance(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = trial_rng(seed, 0);
        let spec = random_jordan_spec(n, &mut rng);
        let j = build_jordan(&spec);
        let p = random_unimodular(n, 2 * n, &mut rng);
        let a = p.conjugate(&j);
        prop_assert_eq!(invariant_factors(&a).unwrap(), invariant_factors(&j).unwrap());
        let s = summarize(&a).unwrap();
        prop_assert_eq!(
            (s.num_distinct, s.defectivity, s.derogatory_index),
            (spec.num_distinct(), spec.defectivity(), spec.derogatory_index())
        );
    }

    #[test]
    fn improved_bound_on_random_pairs(a in int_matrix(3), b in int_matrix(3)) {
        // A violation would surface as an error.
        let r = bound_report(&a, &b).unwrap();
        prop_assert!(r.slack >= 0);
        prop_assert!(r.improved_bound <= r.farrell_bound as i64);
    }
}

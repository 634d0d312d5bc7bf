mod common;

use adaptive_qc::inst::{
    born_at, compose_h, compose_v, id_h, id_v, instrument_distance, kleisli, AdaptiveInstrument, KleisliMap,
};
use proptest::prelude::*;
use rand::Rng;

use common::{interchange_defect, random_grid, random_instrument, random_state, rng};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn interchange_law(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_grid(&mut r, 1, 1);
        prop_assert!(interchange_defect(&g) < 1e-10);
    }

    #[test]
    fn interchange_law_wide(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_grid(&mut r, 2, 2);
        prop_assert!(interchange_defect(&g) < 1e-10);
    }

    #[test]
    fn compositions_are_associative_and_unital(seed in any::<u64>()) {
        let mut r = rng(seed);
        let mut s = |max: usize| r.gen_range(0..=max);
        let dims: Vec<usize> = (0..8).map(|_| s(1)).collect();
        let a = random_instrument(&mut r, dims[0], dims[1], dims[2], dims[3]);
        let b = random_instrument(&mut r, dims[4], dims[5], dims[3], dims[6]);
        let c = random_instrument(&mut r, dims[7], dims[0], dims[6], dims[1]);
        let lhs = compose_h(&compose_h(&a, &b).unwrap(), &c).unwrap();
        let rhs = compose_h(&a, &compose_h(&b, &c).unwrap()).unwrap();
        prop_assert!(instrument_distance(&lhs, &rhs).unwrap() < 1e-10);

        let b = random_instrument(&mut r, dims[1], dims[4], dims[5], dims[6]);
        let c = random_instrument(&mut r, dims[4], dims[7], dims[0], dims[2]);
        let lhs = compose_v(&compose_v(&a, &b).unwrap(), &c).unwrap();
        let rhs = compose_v(&a, &compose_v(&b, &c).unwrap()).unwrap();
        prop_assert!(instrument_distance(&lhs, &rhs).unwrap() < 1e-10);

        let unit_h = compose_h(&compose_h(&id_h(a.m()), &a).unwrap(), &id_h(a.n())).unwrap();
        prop_assert!(instrument_distance(&unit_h, &a).unwrap() < 1e-10);
        let unit_v = compose_v(&compose_v(&id_v(a.k()), &a).unwrap(), &id_v(a.l())).unwrap();
        prop_assert!(instrument_distance(&unit_v, &a).unwrap() < 1e-10);
    }

    #[test]
    fn boolean_vertical_composition_is_function_composition(
        k in 0usize..3, l in 0usize..3, j in 0usize..3,
        f in proptest::collection::vec(any::<usize>(), 4),
        g in proptest::collection::vec(any::<usize>(), 4),
    ) {
        let fa = move |a: usize| f[a] % (1 << l);
        let ga = move |b: usize| g[b] % (1 << j);
        let composed = compose_v(&AdaptiveInstrument::boolean(k, l, fa.clone()), &AdaptiveInstrument::boolean(l, j, ga.clone())).unwrap();
        let direct = KleisliMap::deterministic(k, j, |a| ga(fa(a)));
        prop_assert_eq!(kleisli(&composed).unwrap(), direct);
    }

    #[test]
    fn born_distributions_sum_to_one(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (k, l, m, n) = (r.gen_range(0..=2), r.gen_range(0..=2), r.gen_range(0..=2), r.gen_range(0..=2));
        let inst = random_instrument(&mut r, k, l, m, n);
        let rho = random_state(&mut r, m);
        for a in 0..1usize << k {
            let p = born_at(&rho, &inst, a).unwrap();
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!(p.iter().all(|x| *x > -1e-12));
        }
    }
}

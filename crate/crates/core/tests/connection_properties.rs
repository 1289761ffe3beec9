use connexion::connection::{
    gauge_transform, poincare_rank, ramified_pullback, GaugeTransform, LaurentMatrix, LaurentPoly,
};
use connexion::exact::GaussianRational;
use connexion_testkit::{nonzero_gaussian, rng, system, unit_gauge, Shape};
use proptest::prelude::*;
use rand::Rng;

const SHAPE: Shape =
    Shape { max_rank: 4, min_exp: -3, max_exp: 3, density: 0.5, max_terms: 2, bound: 5, p_complex: 0.3 };

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauge_round_trip(seed in any::<u64>()) {
        let mut g = rng(seed);
        let a = system(&mut g, &SHAPE);
        let p = unit_gauge(&mut g, a.rank());
        let there = gauge_transform(&a, &p).unwrap();
        prop_assert_eq!(gauge_transform(&there, &p.inverse()).unwrap(), a);
    }

    #[test]
    fn pullback_multiplies_pole_order(seed in any::<u64>(), m in 1u32..=6) {
        let a = system(&mut rng(seed), &SHAPE);
        let before = poincare_rank(&a).order;
        prop_assume!(before > 0);
        prop_assert_eq!(poincare_rank(&ramified_pullback(&a, m).unwrap()).order, m as u64 * before);
    }

    #[test]
    fn pullbacks_compose(seed in any::<u64>(), m in 1u32..=4, n in 1u32..=4) {
        let a = system(&mut rng(seed), &SHAPE);
        let twice = ramified_pullback(&ramified_pullback(&a, m).unwrap(), n).unwrap();
        prop_assert_eq!(twice, ramified_pullback(&a, m * n).unwrap());
    }

    /// With `det P = c·z^k`, `tr(P⁻¹AP − P⁻¹·δP) = tr A − k`.
    #[test]
    fn gauge_shifts_trace_by_determinant_exponent(seed in any::<u64>()) {
        let mut g = rng(seed);
        let a = system(&mut g, &SHAPE);
        let r = a.rank();
        let k = g.gen_range(-3..=3);
        let mut scale = LaurentMatrix::identity(r);
        scale[(0, 0)] = LaurentPoly::monomial(nonzero_gaussian(&mut g, 4, 0.5), k);
        let p = GaugeTransform::new(unit_gauge(&mut g, r).matrix().mul(&scale)).unwrap();
        prop_assert_eq!(p.determinant().1, k);
        let shifted = &a.trace() - &LaurentPoly::constant(GaussianRational::from_ints(k, 0));
        prop_assert_eq!(gauge_transform(&a, &p).unwrap().trace(), shifted);
    }
}

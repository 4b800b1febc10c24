use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skewreduce::matrix::{naive_row_reduce, reduce_basecase_with_stats, simple_transform};
use skewreduce::reduce::{orthogonality_defect, reduce_dc_with_stats};
use skewreduce::sample::{random_homogeneous_matrix, random_matrix};
use skewreduce::{
    reduce_dc, reduce_iterated, reduce_to_wpf, DefectHint, FieldContext, MulStrategy,
    ReduceOptions, ReductionStats, SkewMatrix,
};

fn fields() -> Vec<FieldContext> {
    vec![
        FieldContext::new(2, 1, 8, None).unwrap(),
        FieldContext::new(3, 1, 3, None).unwrap(),
        FieldContext::new(2, 2, 3, None).unwrap(),
    ]
}

fn drop_or_wpf(before: &SkewMatrix, after: &SkewMatrix, t: usize) -> bool {
    match (before.degree(), after.degree()) {
        (Some(b), Some(a)) => after.is_weak_popov() || a + t <= b,
        (_, None) => true,
        (None, Some(_)) => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dc_matches_iterated(seed in any::<u64>(), field in 0usize..3, r in 1usize..4, deg in 0usize..16, t in 0usize..12) {
        let ctx = &fields()[field];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(ctx, r, deg, &mut rng);
        let it = reduce_iterated(ctx, &m, t).unwrap();
        for strategy in [MulStrategy::Naive, MulStrategy::Karatsuba] {
            let dc = reduce_dc(ctx, &m, t, &ReduceOptions::with_strategy(strategy)).unwrap();
            prop_assert_eq!(&dc, &it);
        }
        let cut = ReduceOptions { strategy: MulStrategy::Naive, iterated_cutoff: Some(4) };
        prop_assert_eq!(&reduce_dc(ctx, &m, t, &cut).unwrap(), &it);
    }

    #[test]
    fn transform_depends_on_top_coefficients_only(seed in any::<u64>(), r in 1usize..4, deg in 0usize..16, t in 1usize..10) {
        let ctx = &fields()[0];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(ctx, r, deg, &mut rng);
        prop_assert_eq!(reduce_iterated(ctx, &m, t).unwrap(), reduce_iterated(ctx, &m.truncate(t), t).unwrap());
    }

    #[test]
    fn transform_is_short_and_effective(seed in any::<u64>(), field in 0usize..3, r in 1usize..4, deg in 0usize..16, t in 1usize..12) {
        let ctx = &fields()[field];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(ctx, r, deg, &mut rng);
        let mut stats = ReductionStats::default();
        let u = reduce_dc_with_stats(ctx, &m, t, &ReduceOptions::default(), &mut stats).unwrap();
        prop_assert!(u.matrix.max_entry_len() <= t);
        prop_assert!(stats.base_case_count <= t);
        let um = u.matrix.mul(ctx, &m, MulStrategy::Naive).unwrap();
        prop_assert!(drop_or_wpf(&m, &um, t));
        prop_assert_eq!(&u.apply(ctx, &m), &um);
        prop_assert_eq!(u.apply_inverse(ctx, &um), m);
    }

    #[test]
    fn full_reduction_reaches_minimal_degree(seed in any::<u64>(), field in 0usize..3, r in 1usize..4, deg in 0usize..10) {
        let ctx = &fields()[field];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(ctx, r, deg, &mut rng);
        let (u_naive, naive) = naive_row_reduce(ctx, &m).unwrap();
        prop_assume!(naive.first_zero_row().is_none());
        prop_assert!(naive.is_weak_popov());
        prop_assert_eq!(u_naive.apply(ctx, &m), naive.clone());
        let out = reduce_to_wpf(ctx, &m, None, &ReduceOptions::default()).unwrap();
        prop_assert!(out.reduced.is_weak_popov());
        prop_assert_eq!(out.reduced.degree(), naive.degree());
        prop_assert_eq!(out.reduced.degree().unwrap() + out.target, m.degree().unwrap());
    }

    #[test]
    fn basecase_cost(seed in any::<u64>(), field in 0usize..3, r in 1usize..9) {
        let ctx = &fields()[field];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_homogeneous_matrix(ctx, r, 6, &mut rng);
        let mut stats = ReductionStats::default();
        let u = reduce_basecase_with_stats(ctx, &m, &mut stats).unwrap();
        prop_assert!(stats.st_count <= r * r);
        prop_assert!(stats.max_st_coeff_ops <= 2 * r);
        prop_assert!(u.matrix.max_entry_len() <= 1);
        prop_assert_eq!(stats.base_case_count, 1);
    }
}

#[test]
fn simple_transform_preserves_triangular_determinant_degree() {
    let ctx = &fields()[0];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let mut m = random_matrix(ctx, 3, 6, &mut rng);
        for i in 0..3 {
            for j in 0..i {
                m.set_entry(i, j, skewreduce::SkewPoly::zero());
            }
            if m.entry(i, i).is_zero() {
                m.set_entry(i, i, skewreduce::SkewPoly::one());
            }
        }
        let defect = orthogonality_defect(ctx, &m, DefectHint::Triangular).unwrap();
        let det = m.degree().unwrap() - defect;
        let mut work = m.clone();
        let mut u = SkewMatrix::identity(3);
        while let Some((i, j)) = work.find_conflict().unwrap() {
            let key = |w: &SkewMatrix| (w.row(i).degree(), w.row(i).leading_position().ok());
            let before = key(&work);
            let f = simple_transform(ctx, &mut work, Some(&mut u), i, j).unwrap();
            assert_eq!((f.i, f.j), (i, j));
            assert!(key(&work) < before);
            assert_eq!(work, u.mul(ctx, &m, MulStrategy::Naive).unwrap());
        }
        assert_eq!(work.degree().unwrap(), det);
        assert_eq!(
            orthogonality_defect(ctx, &m, DefectHint::ViaReduction).unwrap(),
            defect
        );
    }
}

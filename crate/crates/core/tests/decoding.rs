use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skewreduce::gabidulin::{
    add_rank_error, build_b, build_instance, decode, derive_seed, encode, random_messages,
    roundtrip_trial, TrialStatus,
};
use skewreduce::reduce::orthogonality_defect;
use skewreduce::{reduce_to_wpf, CodeParams, DefectHint, FieldContext, MulStrategy, ReduceOptions};

#[test]
fn key_equation_matrix_reduces_to_determinant_degree() {
    let ctx = FieldContext::new(2, 1, 12, None).unwrap();
    for (trial, ell) in (0..24).zip([1, 2, 3].into_iter().cycle()) {
        let seed = derive_seed(11, trial);
        let params = CodeParams::random(&ctx, 12, 5, ell, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let msgs = random_messages(&ctx, &params, &mut rng);
        let cw = encode(&ctx, &params, &msgs).unwrap();
        let (recv, _) = add_rank_error(&ctx, &cw, (trial % 5) as usize, seed).unwrap();
        let b = build_b(&build_instance(&ctx, &params, &recv).unwrap());
        assert!(b.is_upper_triangular());
        let defect = orthogonality_defect(&ctx, &b, DefectHint::Triangular).unwrap();
        assert_eq!(
            defect,
            orthogonality_defect(&ctx, &b, DefectHint::ViaReduction).unwrap()
        );
        let out = reduce_to_wpf(&ctx, &b, Some(defect), &ReduceOptions::default()).unwrap();
        assert!(out.reduced.is_weak_popov());
        assert_eq!(out.reduced.degree().unwrap() + defect, b.degree().unwrap());
        assert!(out.stats.base_case_count <= defect + out.reduced.nrows());
    }
}

#[test]
fn interleaved_round_trips() {
    let ctx = FieldContext::new(2, 1, 12, None).unwrap();
    let opts = ReduceOptions::with_strategy(MulStrategy::Karatsuba);
    let mut ok = 0;
    for trial in 0..20 {
        // ⌊2·(12 − 6)/3⌋ = 4 > ⌊(12 − 6)/2⌋ = 3
        let r = roundtrip_trial(&ctx, 12, &[6, 6], 4, trial, derive_seed(2, trial), &opts).unwrap();
        assert_ne!(r.status, TrialStatus::Miscorrection);
        ok += usize::from(r.status == TrialStatus::Success);
    }
    assert!(ok >= 15, "{ok}/20");
}

#[test]
fn odd_characteristic_round_trip() {
    let ctx = FieldContext::new(3, 1, 8, None).unwrap();
    for trial in 0..10 {
        let r = roundtrip_trial(
            &ctx,
            8,
            &[4],
            2,
            trial,
            derive_seed(3, trial),
            &ReduceOptions::default(),
        )
        .unwrap();
        assert_eq!(r.status, TrialStatus::Success, "{r:?}");
    }
}

#[test]
fn decoded_messages_satisfy_degree_bounds() {
    let ctx = FieldContext::new(2, 1, 12, None).unwrap();
    let params = CodeParams::random(&ctx, 12, 4, 2, 5).unwrap();
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let msgs = random_messages(&ctx, &params, &mut rng);
        let cw = encode(&ctx, &params, &msgs).unwrap();
        let (recv, _) = add_rank_error(&ctx, &cw, 8, seed).unwrap();
        let report = decode(&ctx, &params, &recv, &ReduceOptions::default()).unwrap();
        if let Some(found) = report.messages() {
            for (f, &k) in found.iter().zip(&params.k) {
                assert!(f.degree().is_none_or(|d| d < k));
            }
        }
    }
}

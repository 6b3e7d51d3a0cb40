use lacunary_core::coeffield::int;
use lacunary_core::lattice::{indep_certificate, DEFAULT_TRIAL_BOUND};
use lacunary_core::BigInt;
use proptest::prelude::*;

#[test]
fn documented_certificate() {
    let bases: Vec<BigInt> = [8, 27, 12, 18].into_iter().map(int).collect();
    let cert = indep_certificate(&bases, DEFAULT_TRIAL_BOUND).unwrap();
    assert_eq!(cert.rank, 2);
    assert_eq!(cert.chosen_bases(), [int(8), int(27)]);
    assert!(cert.verify());
    // 12^3 = 8^2 · 27 and 18^3 = 8 · 27^2
    assert_eq!(int(12).pow(3u32), int(8).pow(2u32) * int(27));
    assert_eq!(int(18).pow(3u32), int(8) * int(27).pow(2u32));
    let rel: Vec<(usize, i64, Vec<i64>)> = cert.relations.iter().map(|r| (r.index, r.m_ii, r.exps.clone())).collect();
    assert_eq!(rel, [(2, 3, vec![2, 1]), (3, 3, vec![1, 2])]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rank_is_permutation_invariant(
        bases in proptest::collection::vec(2u64..5000, 1..8),
        seed in proptest::collection::vec(any::<u32>(), 8),
    ) {
        let big: Vec<BigInt> = bases.iter().map(|&b| BigInt::from(b)).collect();
        let cert = indep_certificate(&big, DEFAULT_TRIAL_BOUND).unwrap();
        prop_assert!(cert.verify());
        let mut idx: Vec<usize> = (0..big.len()).collect();
        idx.sort_by_key(|&i| seed[i % seed.len()].wrapping_mul(i as u32 + 1));
        let permuted: Vec<BigInt> = idx.iter().map(|&i| big[i].clone()).collect();
        let other = indep_certificate(&permuted, DEFAULT_TRIAL_BOUND).unwrap();
        prop_assert_eq!(other.rank, cert.rank);
        prop_assert!(other.verify());
    }
}

use leafdist_core::exact::{
    cumulative_fraction, distance_count, distribution, mean_distance, median, percentile,
    tree_count, variance_distance, BigRatio,
};
use leafdist_core::tree::{decode, parse_newick, random_code, sample_uniform, Enumerator};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn normalization_and_moments_up_to_300() {
    for n in 3..=300u64 {
        let dist = distribution(n).unwrap();
        assert_eq!(dist.total(), tree_count(n).unwrap(), "n={n}");
        let direct_sum: num_bigint::BigUint = (1..n).map(|i| distance_count(n, i).unwrap()).sum();
        assert_eq!(direct_sum, dist.total());
        let var = variance_distance(n).unwrap();
        assert_eq!(mean_distance(n).unwrap(), dist.mean(), "n={n}");
        assert_eq!(var, dist.variance(), "n={n}");
        assert!(var >= BigRatio::zero());
    }
}

#[test]
fn cumulative_is_monotone_and_median_bracketed() {
    let half = BigRatio::new(1.into(), 2.into());
    for n in 3..=120u64 {
        let cdf: Vec<_> = (1..n).map(|k| cumulative_fraction(n, k).unwrap()).collect();
        assert!(cdf.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(cdf.last().unwrap(), &BigRatio::one());
        let m = median(n).unwrap();
        assert!((1..n).contains(&m));
        assert!(cdf[(m - 1) as usize] <= half);
        if m < n - 1 {
            assert!(cdf[m as usize] > half);
        }
    }
}

#[test]
fn full_enumeration_at_ten() {
    let dist = Enumerator::default().empirical_distribution(10).unwrap();
    assert_eq!(dist, distribution(10).unwrap());
}

fn ratio_strategy() -> impl Strategy<Value = BigRatio> {
    (2i64..1000)
        .prop_flat_map(|den| (1..den).prop_map(move |num| BigRatio::new(num.into(), den.into())))
}

proptest! {
    #[test]
    fn percentile_is_monotone_in_p(n in 3u64..6000, p in ratio_strategy(), q in ratio_strategy()) {
        let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
        let a = percentile(n, &lo).unwrap();
        let b = percentile(n, &hi).unwrap();
        prop_assert!(a <= b);
        prop_assert!(a >= 1 && b < n);
    }

    #[test]
    fn median_is_half_percentile(n in 3u64..20_000) {
        prop_assert_eq!(median(n).unwrap(), percentile(n, &BigRatio::new(1.into(), 2.into())).unwrap());
    }

    #[test]
    fn sampled_trees_are_valid(n in 3usize..80, seed in any::<u64>()) {
        let tree = sample_uniform(n, seed).unwrap();
        tree.check_invariants().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let same = decode(n, &random_code(n, &mut rng)).unwrap();
        prop_assert_eq!(&same, &tree);
        for k in 1..=n.min(6) {
            for l in 1..=n.min(6) {
                if k != l {
                    let d = tree.leaf_distance(k, l).unwrap();
                    prop_assert_eq!(d, tree.leaf_distance(l, k).unwrap());
                    prop_assert!(d >= 2 && d < n);
                }
            }
        }
        let back = parse_newick(&tree.to_newick()).unwrap();
        prop_assert_eq!(back.canonical_form(), tree.canonical_form());
    }
}

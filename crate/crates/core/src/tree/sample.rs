use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{decode, InsertionCode, PhyloTree};
use crate::error::{domain, Result};

/// Draws each `e_k` uniformly from `1..=2k-5`, giving a uniform code and so
/// a uniform tree.
pub fn random_code<R: Rng + ?Sized>(n: usize, rng: &mut R) -> InsertionCode {
    let choices = (4..=n)
        .map(|leaf| rng.random_range(1..=(2 * leaf - 5) as u32))
        .collect();
    InsertionCode::new_unchecked(choices)
}

pub fn sample_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<PhyloTree> {
    if n < 3 {
        return Err(domain!("trees need at least 3 leaves, got {n}"));
    }
    decode(n, &random_code(n, rng))
}

/// Uniform tree on `n` leaves from a ChaCha8 stream seeded with `seed`.
pub fn sample_uniform(n: usize, seed: u64) -> Result<PhyloTree> {
    sample_with(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Histogram of `d(1, 2)` over `samples` uniform trees (index 0 is distance
/// 1). All samples come from one ChaCha8 stream seeded with `seed`; the
/// optional `each` callback sees every sampled tree in order.
pub fn monte_carlo_distribution(
    n: usize,
    samples: u64,
    seed: u64,
    mut each: Option<&mut dyn FnMut(&PhyloTree)>,
) -> Result<Vec<u64>> {
    if n < 3 {
        return Err(domain!("trees need at least 3 leaves, got {n}"));
    }
    if samples == 0 {
        return Err(domain!("need at least one sample"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut histogram = vec![0u64; n - 1];
    for _ in 0..samples {
        let tree = sample_with(n, &mut rng)?;
        histogram[tree.leaf_distance(1, 2)? - 1] += 1;
        if let Some(f) = each.as_deref_mut() {
            f(&tree);
        }
    }
    Ok(histogram)
}

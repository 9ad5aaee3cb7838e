//! Seed derivation.
//!
//! Every random stream in the crate descends from a single root seed. Child
//! seeds are obtained with [`split`], which runs the splitmix64 finalizer over
//! `seed + (index + 1) * GOLDEN`. Shards of a Monte Carlo run use
//! `split(seed, shard)`, suite instances use `split(root, instance_id)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// splitmix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of child stream `index` from `seed`.
pub fn split(seed: u64, index: u64) -> u64 {
    splitmix64(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Number of shards Monte Carlo estimators split their samples into.
pub const MC_SHARDS: u64 = 16;

/// Sample counts per shard; the first `n % shards` shards take one extra sample.
pub fn shard_sizes(n: usize, shards: u64) -> Vec<usize> {
    let s = shards as usize;
    (0..s).map(|i| n / s + usize::from(i < n % s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_is_deterministic_and_distinct() {
        assert_eq!(split(7, 3), split(7, 3));
        assert_ne!(split(7, 3), split(7, 4));
        assert_ne!(split(7, 3), split(8, 3));
    }

    #[test]
    fn shard_sizes_sum() {
        let v = shard_sizes(1003, 16);
        assert_eq!(v.iter().sum::<usize>(), 1003);
        assert_eq!(v.len(), 16);
    }
}

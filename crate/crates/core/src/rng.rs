//! Seeded random streams.
//!
//! All randomness comes from ChaCha8 ([`rand_chacha::ChaCha8Rng`]), whose
//! output is specified independently of platform and word size. A run is
//! identified by `(seed, stream)`: the seed is expanded into the 256-bit key
//! and the stream index selects one of the 2^64 independent ChaCha streams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed used whenever the caller does not pick one.
pub const DEFAULT_SEED: u64 = 20_190_101;

/// The generator for run `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Running sums of `probs`, used with [`sample_index`].
pub(crate) fn cumulative(probs: &[f64]) -> Vec<f64> {
    probs
        .iter()
        .scan(0.0, |acc, &p| {
            *acc += p;
            Some(*acc)
        })
        .collect()
}

/// Draws an index with probability `probs[i]`, given `cdf = cumulative(probs)`.
///
/// Indices with zero probability are never returned, including when rounding
/// leaves the final cumulative sum just below one.
pub(crate) fn sample_index<R: Rng + ?Sized>(rng: &mut R, probs: &[f64], cdf: &[f64]) -> usize {
    let u: f64 = rng.random();
    if let Some(i) = cdf.iter().position(|&c| u < c) {
        return i;
    }
    probs
        .iter()
        .rposition(|&p| p > 0.0)
        .unwrap_or(probs.len() - 1)
}

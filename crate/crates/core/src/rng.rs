//! Seeded random streams.
//!
//! Every random choice in the crate comes from a ChaCha8 generator keyed by
//! a 64-bit seed (expanded with `SeedableRng::seed_from_u64`) and a 64-bit
//! stream number. Cross-validation folds use stream 0; train/test split `r`
//! uses stream `r + 1`. Streams are independent, so splits can be generated
//! or consumed in any order without changing results.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const FOLD_STREAM: u64 = 0;

pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniformly random permutation of `0..n`.
pub fn permutation(n: usize, seed: u64, stream_id: u64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut stream(seed, stream_id));
    idx
}

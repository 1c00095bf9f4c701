//! Deterministic RNG streams: one master seed, named substreams.
//!
//! Every source of randomness in the crate draws from a `ChaCha8Rng` keyed by the
//! master seed with its stream id set to a hash of a stream name such as
//! `train:1000:3` or `test`. Adding repetitions or reordering work therefore never
//! perturbs the draws of existing cells, and results are identical for any number
//! of worker threads.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// FNV-1a 64-bit hash; stable across platforms and runs.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100_0000_01b3);
    }
    hash
}

/// RNG for the named substream of the given master seed.
pub fn substream(seed: u64, name: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a(name.as_bytes()));
    rng
}

//! Deterministic seed derivation.
//!
//! Every random stream in the crate is a ChaCha8 stream addressed by
//! `(key, stream)`, where the key is derived from the root seed and a
//! purpose tag. Trajectory `i` always uses stream `i`, so results never
//! depend on how work is split across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from a parent seed and a tag.
pub fn derive(seed: u64, tag: u64) -> u64 {
    mix64(seed ^ mix64(tag.wrapping_add(0x5851_f42d_4c95_7f2d)))
}

/// Purpose tags, so that e.g. set generation and walk simulation never share a stream.
pub mod tag {
    pub const PERCOLATION: u64 = 1;
    pub const SAMPLING: u64 = 2;
    pub const WALK: u64 = 3;
    pub const START_VERTICES: u64 = 4;
    pub const DISORDER: u64 = 5;
    pub const REM_WALK: u64 = 6;
    pub const VN_SAMPLE: u64 = 7;
}

/// The RNG for `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    let mut s = seed;
    for chunk in key.chunks_exact_mut(8) {
        s = mix64(s);
        chunk.copy_from_slice(&s.to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(stream);
    rng
}

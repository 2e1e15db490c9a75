//! Seed derivation for reproducible parallel Monte Carlo.
//!
//! Every estimation job owns a substream identified by `(root seed,
//! stream index)`, and splits its work into fixed-size chunks identified
//! by `(substream seed, chunk index)`. Seeds are derived by counter-style
//! mixing rather than by drawing from a shared generator, so the random
//! numbers a chunk consumes depend only on those indices: results are
//! identical no matter how many worker threads run or in what order they
//! finish.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// SplitMix64 output function; a full-period mixer on 64-bit words.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives the seed of substream `index` under a root seed.
pub fn substream(root: u64, index: u64) -> u64 {
    splitmix64(root ^ splitmix64(splitmix64(index)))
}

/// Generator for one chunk of one substream.
pub fn chunk_rng(substream_seed: u64, chunk: u64) -> ChaCha12Rng {
    let a = splitmix64(substream_seed);
    let b = splitmix64(a ^ splitmix64(chunk));
    let c = splitmix64(b);
    let d = splitmix64(c);
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&a.to_le_bytes());
    key[8..16].copy_from_slice(&b.to_le_bytes());
    key[16..24].copy_from_slice(&c.to_le_bytes());
    key[24..].copy_from_slice(&d.to_le_bytes());
    ChaCha12Rng::from_seed(key)
}

//! Deterministic random streams.
//!
//! Every replication owns its generators outright; nothing is shared across
//! threads. Stream identities are derived from indices only, so results do
//! not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator type used throughout the crate.
pub type Stream = ChaCha8Rng;

/// Sub-stream carrying the sampling-scheme draws of a replication.
pub const SCHEME_STREAM: u64 = 0;
/// Sub-stream carrying the path (model) draws of a replication.
pub const PATH_STREAM: u64 = 1;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a master seed with an index path into a single 64-bit seed.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix64(master), |acc, &ix| {
        splitmix64(acc ^ splitmix64(ix))
    })
}

/// Generator for `seed`, positioned on the given ChaCha stream.
pub fn stream(seed: u64, stream_id: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

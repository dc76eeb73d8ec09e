//! Seeded random streams. Every consumer draws from its own ChaCha stream
//! derived from the single user seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const STREAM_GENERATION: u64 = 1;
pub const STREAM_SAMPLING: u64 = 2;
pub const STREAM_BENCH: u64 = 3;

/// Generator for stream `stream`, further split by `index`.
pub fn substream(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index);
    rng
}

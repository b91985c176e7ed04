//! Seeded random streams.
//!
//! Every stream is a ChaCha8 generator keyed by the 64-bit seed (expanded with
//! `SeedableRng::seed_from_u64`) and positioned on the ChaCha stream selected by
//! the stream id. Disjoint stream ids never share key-stream blocks, so
//! realizations drawn in parallel are independent and reproducible regardless
//! of scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Returns the generator for `(seed, stream)`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

//! Per-trial random streams.
//!
//! Trial `n` of a run with master seed `seed` draws from ChaCha8 keyed by
//! `seed` (expanded with `SeedableRng::seed_from_u64`) on stream `n`. Streams
//! do not overlap, so results are the same for any worker count or order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TrialRng = ChaCha8Rng;

pub fn trial_rng(seed: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

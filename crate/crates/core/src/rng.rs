//! Per-trial random streams.
//!
//! Every random draw in a Monte-Carlo run comes from a ChaCha8 stream whose key
//! is `(seed, point, purpose)` and whose stream id is the trial index. Draws
//! inside a trial advance the block counter, so the `k`-th draw is fixed by
//! `(seed, point, trial, purpose, k)` no matter which worker runs the trial.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a stream is used for. Error sampling and readout never share draws.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Purpose {
    Errors = 1,
    Readout = 2,
    Other = 3,
}

pub fn trial_rng(seed: u64, point: u64, trial: u64, purpose: Purpose) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&point.to_le_bytes());
    key[16..24].copy_from_slice(&(purpose as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}

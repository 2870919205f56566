//! Seeded random streams.
//!
//! Every random draw in the simulator comes from ChaCha8 (`rand_chacha`),
//! which is value-stable across platforms and crate releases. One seed feeds
//! two independent streams: stream 0 places the nodes and stream 1 drives
//! head election, so every protocol sees the same deployment for a given seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

const DEPLOYMENT_STREAM: u64 = 0;
const ELECTION_STREAM: u64 = 1;

pub fn deployment_rng(seed: u64) -> SimRng {
    stream(seed, DEPLOYMENT_STREAM)
}

pub fn election_rng(seed: u64) -> SimRng {
    stream(seed, ELECTION_STREAM)
}

fn stream(seed: u64, id: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

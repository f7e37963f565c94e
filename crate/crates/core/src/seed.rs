//! Seeding and stream splitting.
//!
//! Every random draw in the crate comes from a [`ChaCha8Rng`] seeded through
//! [`Seed::rng`]. Independent streams (one per trial, window, or sample) use a
//! child seed `derive(master, index)`, a SplitMix64 finalizer applied to the
//! master seed combined with the stream index. Results therefore depend only
//! on the seed and never on how work is scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Seed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Child seed for stream `index`.
    pub fn derive(self, index: u64) -> Seed {
        let mixed = splitmix64(self.0.wrapping_add(GOLDEN_GAMMA));
        Seed(splitmix64(mixed ^ index.wrapping_mul(GOLDEN_GAMMA).wrapping_add(GOLDEN_GAMMA)))
    }

    /// Child seed for a two-level stream index.
    pub fn derive2(self, a: u64, b: u64) -> Seed {
        self.derive(a).derive(b)
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

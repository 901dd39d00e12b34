//! Seeded randomness.
//!
//! Every random stream in the crate comes from [`RngSeed::rng`], a ChaCha8
//! generator (`rand_chacha`), whose output is specified independently of
//! platform and word size. Sub-streams for experiment cells and replications
//! are keyed with [`RngSeed::derive`], which mixes the parent seed and a list
//! of tags through SplitMix64.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub type SeriationRng = ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RngSeed(pub u64);

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngSeed {
    pub fn rng(self) -> SeriationRng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Child seed for the sub-stream identified by `tags`.
    pub fn derive(self, tags: &[u64]) -> RngSeed {
        let mut h = splitmix64(self.0);
        for &t in tags {
            h = splitmix64(h ^ splitmix64(t));
        }
        RngSeed(h)
    }
}

impl From<u64> for RngSeed {
    fn from(v: u64) -> Self {
        RngSeed(v)
    }
}

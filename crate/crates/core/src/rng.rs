//! Reproducible random streams split from one master seed.
//!
//! Every randomized draw in a campaign is keyed by a path such as
//! `[experiment, point, basis]`; the path is folded into a ChaCha stream id so
//! parallel schedules see the same numbers as sequential ones.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A master seed plus a derived stream id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamSeed {
    pub master: u64,
    pub stream: u64,
}

impl StreamSeed {
    pub fn new(master: u64, path: &[u64]) -> Self {
        Self {
            master,
            stream: stream_id(path),
        }
    }

    /// A child stream one level deeper.
    pub fn child(&self, index: u64) -> Self {
        Self {
            master: self.master,
            stream: stream_id(&[self.stream, index]),
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        rng
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn stream_id(path: &[u64]) -> u64 {
    path.iter()
        .fold(0x5eed_0000_0000_0001, |acc, &p| splitmix(acc ^ splitmix(p)))
}

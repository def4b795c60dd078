//! Reproducible randomness: one global seed fans out into independent
//! ChaCha streams keyed by the task that consumes them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a random stream is used for. Distinct purposes never share a stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Purpose {
    CharacteristicNumber = 1,
    Chromatic = 2,
    Relative = 3,
    RankCheck = 4,
    TensorSample = 5,
    Restriction = 6,
}

/// Stream key `(purpose, index, trial)`; the index usually names the
/// coefficient, the trial counts independent redraws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamKey {
    pub purpose: Purpose,
    pub index: u32,
    pub trial: u32,
}

impl StreamKey {
    pub fn new(purpose: Purpose, index: u32, trial: u32) -> Self {
        StreamKey { purpose, index, trial }
    }

    fn stream_id(self) -> u64 {
        ((self.purpose as u64) << 56) | ((self.index as u64 & 0xff_ffff) << 32) | self.trial as u64
    }
}

pub fn stream_rng(seed: u64, key: StreamKey) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(key.stream_id());
    rng
}

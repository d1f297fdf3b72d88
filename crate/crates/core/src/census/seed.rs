use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Master seed plus a derivation path naming one replica stream.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed {
    pub master: u64,
    #[serde(default)]
    pub path: Vec<u64>,
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

impl Seed {
    pub fn new(master: u64) -> Seed {
        Seed {
            master,
            path: Vec::new(),
        }
    }

    /// The stream for sub-task `index` of this one.
    pub fn child(&self, index: u64) -> Seed {
        let mut path = self.path.clone();
        path.push(index);
        Seed {
            master: self.master,
            path,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut state = splitmix(self.master);
        for (depth, &i) in self.path.iter().enumerate() {
            state = splitmix(state ^ splitmix(i.wrapping_add((depth as u64) << 48)));
        }
        let mut key = [0u8; 32];
        for (chunk, word) in key.chunks_mut(8).zip(0u64..) {
            chunk.copy_from_slice(&splitmix(state.wrapping_add(word)).to_le_bytes());
        }
        ChaCha8Rng::from_seed(key)
    }
}

//! Seeded random streams.
//!
//! Every random draw in the crate comes from a ChaCha8 stream whose key is
//! derived from `(seed, label, index)`. Independent trials therefore get
//! independent streams no matter how work is scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type Rng = ChaCha8Rng;

/// The substream named `label` with sub-index `index` under `seed`.
pub fn stream(seed: u64, label: &str, index: u64) -> Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update((label.len() as u64).to_le_bytes());
    h.update(label.as_bytes());
    h.update(index.to_le_bytes());
    let digest = h.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest[..32]);
    ChaCha8Rng::from_seed(key)
}

//! Run-seed derivation.
//!
//! The seed of a grid cell is the first 8 bytes (little-endian) of
//! SHA-256 over `root_seed as u64 LE ‖ model id UTF-8 ‖ 0x00 ‖ layers as u64
//! LE ‖ repeat as u64 LE`. The encoding is part of the results format: do not
//! change it.

use sha2::{Digest, Sha256};

pub fn run_seed(root_seed: u64, model_id: &str, layers: usize, repeat: usize) -> u64 {
    let mut h = Sha256::new();
    h.update(root_seed.to_le_bytes());
    h.update(model_id.as_bytes());
    h.update([0u8]);
    h.update((layers as u64).to_le_bytes());
    h.update((repeat as u64).to_le_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("32-byte digest"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frozen_value() {
        // Pinned so a refactor cannot silently change every experiment.
        assert_eq!(run_seed(0, "FM", 1, 0), 0x9402_9f41_8d10_e22f);
        assert_ne!(run_seed(0, "FM", 1, 0), run_seed(0, "FM", 1, 1));
        assert_ne!(run_seed(0, "FM", 1, 0), run_seed(1, "FM", 1, 0));
        assert_ne!(run_seed(0, "FM", 11, 0), run_seed(0, "FM1", 1, 0));
    }
}

//! Stable child-seed derivation.
//!
//! Seeds are split with the SplitMix64 finalizer, so a derived stream depends
//! only on the parent seed and the salt, never on the platform or on how
//! many threads did the work.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for stream `salt` under `seed`.
pub fn derive_seed(seed: u64, salt: u64) -> u64 {
    splitmix64(seed ^ splitmix64(salt))
}

/// Child seed for a path of salts, applied left to right.
pub fn derive_path(seed: u64, salts: &[u64]) -> u64 {
    salts.iter().fold(seed, |s, &salt| derive_seed(s, salt))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivation_is_stable() {
        // Frozen values; changing them silently reshuffles every experiment.
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(derive_seed(1, 2), derive_seed(1, 2));
        assert_ne!(derive_seed(1, 2), derive_seed(2, 1));
        assert_eq!(derive_path(5, &[1, 2]), derive_seed(derive_seed(5, 1), 2));
    }
}

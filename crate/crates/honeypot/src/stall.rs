use crate::fs::VirtualFs;
use crate::HoneypotError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use siren_prob_rsa::{encrypt_blob, generate_keypair, FixtureProvider, DEFAULT_MULTIPLIER};

/// Source of fresh keypairs for protected reads. Every read draws a new
/// key; ROTATE_KEYS replaces the rng wholesale.
pub struct KeySource {
    provider: FixtureProvider,
    rng: ChaCha20Rng,
    multiplier_x: u64,
}

impl KeySource {
    pub fn new(provider: FixtureProvider, seed: u64) -> KeySource {
        KeySource {
            provider,
            rng: ChaCha20Rng::seed_from_u64(seed),
            multiplier_x: DEFAULT_MULTIPLIER,
        }
    }

    pub fn bundled(seed: u64) -> KeySource {
        KeySource::new(FixtureProvider::bundled(), seed)
    }

    /// ROTATE_KEYS with no argument: reseed from the current stream.
    /// With an argument: reseed deterministically.
    pub fn rotate(&mut self, seed: Option<u64>) {
        let seed = seed.unwrap_or_else(|| self.rng.random());
        self.rng = ChaCha20Rng::seed_from_u64(seed);
    }

    fn fresh_hex(&mut self, plaintext: &[u8]) -> Result<String, HoneypotError> {
        let keypair = generate_keypair(&self.provider, &mut self.rng, self.multiplier_x)?;
        // the keypair is dropped here; the session only ever sees hex
        Ok(encrypt_blob(plaintext, &keypair)?.to_hex())
    }
}

/// Serves a protected file as hex ciphertext under a keypair generated
/// for this access alone. The plaintext never reaches the caller.
pub fn read_file_stalled(
    fs: &VirtualFs,
    keys: &mut KeySource,
    path: &str,
) -> Result<String, HoneypotError> {
    let file = fs.get(path).ok_or_else(|| HoneypotError::NotFound(path.to_string()))?;
    if !file.protected {
        return Err(HoneypotError::NotProtected(path.to_string()));
    }
    keys.fresh_hex(&file.content)
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::Utc;
    use std::collections::HashSet;

    #[test]
    fn twenty_reads_twenty_distinct_ciphertexts() {
        let fs = VirtualFs::bundled(Utc::now());
        // seed pinned: 20 consecutive draws from this stream are known
        // to hit 20 distinct prime pairs
        let mut keys = KeySource::bundled(1);
        let mut seen = HashSet::new();
        for _ in 0..20 {
            let hex = read_file_stalled(&fs, &mut keys, "/home/admin/secrets/passwords.txt")
                .unwrap();
            assert!(seen.insert(hex), "repeated ciphertext");
        }
        assert_eq!(seen.len(), 20);
    }

    #[test]
    fn missing_and_unprotected_paths_error() {
        let fs = VirtualFs::bundled(Utc::now());
        let mut keys = KeySource::bundled(1);
        assert!(matches!(
            read_file_stalled(&fs, &mut keys, "/nope"),
            Err(HoneypotError::NotFound(_))
        ));
        assert!(matches!(
            read_file_stalled(&fs, &mut keys, "/etc/hostname"),
            Err(HoneypotError::NotProtected(_))
        ));
    }

    #[test]
    fn rotation_changes_the_draw_sequence() {
        let fs = VirtualFs::bundled(Utc::now());
        let mut a = KeySource::bundled(7);
        let mut b = KeySource::bundled(7);
        b.rotate(Some(8));
        let ha = read_file_stalled(&fs, &mut a, "/home/admin/secrets/api-keys.env").unwrap();
        let hb = read_file_stalled(&fs, &mut b, "/home/admin/secrets/api-keys.env").unwrap();
        assert_ne!(ha, hb);
    }
}

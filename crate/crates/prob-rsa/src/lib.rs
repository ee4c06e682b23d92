//! Probabilistic RSA keyed from weather entropy: daily temperature
//! deltas scaled by a configurable multiplier pick the primes, so every
//! key generation (and therefore every encryption of the same plaintext
//! under a fresh key) differs. Unpadded textbook RSA by construction;
//! toy-scale moduli; a stalling mechanism, not production crypto.

mod cipher;
mod entropy;
mod keyfile;
mod keys;
mod primes;
mod weather;

pub use cipher::{decrypt, decrypt_blob, encrypt, encrypt_blob, modexp, CipherBlob};
pub use entropy::{derive_prime, EntropyProvider, FixtureProvider, WeatherObservation};
pub use keyfile::{load_keypair, save_keypair};
pub use keys::{generate_keypair, keypair_from_primes, recheck_prime, RsaKeyPair, DEFAULT_MULTIPLIER};
pub use primes::{is_prime_u64, miller_rabin, nearest_prime};
pub use weather::{fetch_weather, parse_current_weather, LiveProvider, WeatherError};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RsaError {
    #[error("city index {index} out of range 1..={count}")]
    BadCityIndex { index: usize, count: usize },
    #[error("entropy exhausted: {0} consecutive zero-delta observations")]
    EntropyExhausted(usize),
    #[error("could not draw two distinct primes after {0} attempts")]
    DistinctPrimeFailure(usize),
    #[error("totient {0} too small to build a keypair")]
    PhiTooSmall(num_bigint::BigUint),
    #[error("message must be smaller than the modulus")]
    MessageTooLarge,
    #[error("modulus must exceed 256 to carry at least one plaintext byte per block")]
    ModulusTooSmall,
    #[error("multiplier x must be at least 1")]
    BadMultiplier,
    #[error("ciphertext length {0} is not a multiple of the block width {1}")]
    BadCiphertextLength(usize, usize),
    #[error("weather entropy: {0}")]
    Weather(#[from] weather::WeatherError),
    #[error("key file: {0}")]
    KeyFile(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

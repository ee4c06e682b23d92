use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use siren_prob_rsa::{
    decrypt, decrypt_blob, encrypt, encrypt_blob, generate_keypair, recheck_prime,
    FixtureProvider, DEFAULT_MULTIPLIER,
};
use std::collections::HashSet;

#[test]
fn keypairs_round_trip_random_messages() {
    let provider = FixtureProvider::bundled();
    let mut check_rng = ChaCha20Rng::seed_from_u64(999);
    for seed in 0..10u64 {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let kp = generate_keypair(&provider, &mut rng, DEFAULT_MULTIPLIER).unwrap();
        kp.validate().unwrap();
        assert!(((&kp.e * &kp.d) % &kp.phi).is_one());
        assert!(recheck_prime(&kp.p, &mut check_rng));
        assert!(recheck_prime(&kp.q, &mut check_rng));
        let n_u64: u64 = kp.n.to_string().parse().unwrap();
        for _ in 0..100 {
            let m = BigUint::from(check_rng.random_range(0..n_u64));
            let c = encrypt(&m, &kp.e, &kp.n).unwrap();
            assert_eq!(decrypt(&c, &kp.d, &kp.n).unwrap(), m);
        }
    }
}

#[test]
fn same_plaintext_differs_across_keypairs() {
    let provider = FixtureProvider::bundled();
    let plaintext = b"the quick brown fox jumps over the lazy dog";
    let mut moduli = HashSet::new();
    let mut renderings: Vec<(BigUint, String)> = Vec::new();
    for seed in 0..12u64 {
        let mut rng = ChaCha20Rng::seed_from_u64(seed * 101 + 7);
        let kp = generate_keypair(&provider, &mut rng, DEFAULT_MULTIPLIER).unwrap();
        let blob = encrypt_blob(plaintext, &kp).unwrap();
        assert_eq!(decrypt_blob(&blob, &kp).unwrap(), plaintext);
        moduli.insert(kp.n.clone());
        renderings.push((kp.n, blob.to_hex()));
    }
    assert!(moduli.len() >= 10, "only {} distinct moduli", moduli.len());
    for i in 0..renderings.len() {
        for j in i + 1..renderings.len() {
            if renderings[i].0 != renderings[j].0 {
                assert_ne!(renderings[i].1, renderings[j].1);
            }
        }
    }
}

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;

/// Deterministic Miller-Rabin for u64. The witness set below is proven
/// sufficient for all 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = modpow_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn modpow_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Probabilistic Miller-Rabin over arbitrary-precision integers.
pub fn miller_rabin<R: Rng>(n: &BigUint, rounds: usize, rng: &mut R) -> bool {
    let one = BigUint::one();
    let two = &one + &one;
    if n < &two {
        return false;
    }
    if n == &two {
        return true;
    }
    if (n % &two).is_zero() {
        return false;
    }

    let n_minus_one = n - &one;
    let mut d = n_minus_one.clone();
    let mut s = 0u32;
    while (&d % &two).is_zero() {
        d >>= 1;
        s += 1;
    }

    'round: for _ in 0..rounds {
        // witness in [2, n-2]
        let a = loop {
            let bits = n.bits();
            let mut candidate = BigUint::zero();
            for _ in 0..bits.div_ceil(32) {
                candidate = (candidate << 32) | BigUint::from(rng.random::<u32>());
            }
            let candidate = candidate % &n_minus_one;
            if candidate >= two {
                break candidate;
            }
        };
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_one {
                continue 'round;
            }
        }
        return false;
    }
    true
}

/// The prime nearest to `v`; exact ties go to the larger prime, and any
/// v ≤ 2 maps to 2.
pub fn nearest_prime(v: u64) -> u64 {
    if v <= 2 {
        return 2;
    }
    for distance in 0.. {
        let above = v + distance;
        if is_prime_u64(above) {
            return above;
        }
        if distance < v {
            let below = v - distance;
            if is_prime_u64(below) {
                return below;
            }
        }
    }
    unreachable!("primes are unbounded")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    /// trial-division oracle
    fn is_prime_naive(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn nearest_prime_golden_values() {
        assert_eq!(nearest_prime(20), 19);
        assert_eq!(nearest_prime(21), 23); // tie with 19 → larger wins
        assert_eq!(nearest_prime(2), 2);
        assert_eq!(nearest_prime(0), 2);
        assert_eq!(nearest_prime(7300), 7297);
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..2000u64 {
            assert_eq!(is_prime_u64(n), is_prime_naive(n), "n={n}");
        }
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for n in [104729u64, 1299709, 15485863, 2147483647] {
            assert!(is_prime_u64(n));
            assert!(miller_rabin(&BigUint::from(n), 40, &mut rng));
        }
        for n in [104730u64, 1299711, 15485865u64] {
            assert!(!is_prime_u64(n));
            assert!(!miller_rabin(&BigUint::from(n), 40, &mut rng));
        }
    }

    #[test]
    fn nearest_prime_matches_bruteforce_scan_to_100k() {
        // the acceptance suite extends this sweep to 1e6
        let mut oracle_nearest = |v: u64| -> u64 {
            if v <= 2 {
                return 2;
            }
            for d in 0..v {
                if is_prime_naive(v + d) {
                    return v + d;
                }
                if is_prime_naive(v - d) {
                    return v - d;
                }
            }
            2
        };
        for v in 0..100_000u64 {
            assert_eq!(nearest_prime(v), oracle_nearest(v), "v={v}");
        }
    }
}

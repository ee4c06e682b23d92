use crate::entropy::{derive_prime, EntropyProvider};
use crate::primes::{is_prime_u64, miller_rabin};
use crate::RsaError;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

/// Default scaling factor applied to the temperature delta. Deltas are
/// single-digit Kelvin values; the scale keeps primes out of the trivial
/// range while the moduli stay toy-sized.
pub const DEFAULT_MULTIPLIER: u64 = 10_000;

const MAX_REDRAWS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsaKeyPair {
    pub p: BigUint,
    pub q: BigUint,
    pub n: BigUint,
    pub phi: BigUint,
    pub e: BigUint,
    pub d: BigUint,
    pub multiplier_x: u64,
}

impl RsaKeyPair {
    /// Checks every structural invariant; used by tests and key loading.
    pub fn validate(&self) -> Result<(), RsaError> {
        let ok = self.p != self.q
            && self.n == &self.p * &self.q
            && self.phi == (&self.p - 1u32) * (&self.q - 1u32)
            && self.e > BigUint::one()
            && self.e < self.phi
            && self.d > BigUint::one()
            && self.d < self.phi
            && self.e.gcd(&self.phi).is_one()
            && ((&self.e * &self.d) % &self.phi).is_one()
            && self.multiplier_x >= 1;
        if ok {
            Ok(())
        } else {
            Err(RsaError::KeyFile("keypair invariants violated".into()))
        }
    }
}

/// Modular inverse via the extended Euclidean algorithm over signed
/// big integers. None when gcd(a, m) != 1.
pub(crate) fn modinv(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    let mut r0 = BigInt::from(m.clone());
    let mut r1 = BigInt::from(a.clone());
    let mut t0 = BigInt::zero();
    let mut t1 = BigInt::one();
    while !r1.is_zero() {
        let quot = &r0 / &r1;
        let r2 = &r0 - &quot * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = &t0 - &quot * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if !r0.is_one() {
        return None;
    }
    let m_int = BigInt::from(m.clone());
    let inv = ((t0 % &m_int) + &m_int) % &m_int;
    inv.to_biguint()
}

fn choose_exponents(phi: &BigUint) -> Result<(BigUint, BigUint), RsaError> {
    if phi <= &BigUint::from(3u32) {
        return Err(RsaError::PhiTooSmall(phi.clone()));
    }
    let f4 = BigUint::from(65_537u32);
    let e = if f4 < *phi && f4.gcd(phi).is_one() {
        f4
    } else {
        let mut candidate = BigUint::from(3u32);
        while !candidate.gcd(phi).is_one() {
            candidate += 2u32; // even candidates share the factor 2 with phi
            if candidate >= *phi {
                return Err(RsaError::PhiTooSmall(phi.clone()));
            }
        }
        candidate
    };
    let d = modinv(&e, phi).expect("gcd(e, phi) = 1");
    Ok((e, d))
}

/// Builds a keypair from two given primes. Test and tooling hook that
/// bypasses the entropy source; the same exponent rules apply.
pub fn keypair_from_primes(p: u64, q: u64, multiplier_x: u64) -> Result<RsaKeyPair, RsaError> {
    if multiplier_x < 1 {
        return Err(RsaError::BadMultiplier);
    }
    if p == q {
        return Err(RsaError::DistinctPrimeFailure(0));
    }
    let p = BigUint::from(p);
    let q = BigUint::from(q);
    let n = &p * &q;
    let phi = (&p - 1u32) * (&q - 1u32);
    let (e, d) = choose_exponents(&phi)?;
    Ok(RsaKeyPair { p, q, n, phi, e, d, multiplier_x })
}

/// Draws two distinct weather-derived primes and assembles the keypair.
pub fn generate_keypair<P: EntropyProvider, R: Rng>(
    provider: &P,
    rng: &mut R,
    x: u64,
) -> Result<RsaKeyPair, RsaError> {
    if x < 1 {
        return Err(RsaError::BadMultiplier);
    }
    let p = derive_prime(provider, rng, x)?;
    let mut q = derive_prime(provider, rng, x)?;
    let mut redraws = 0;
    while q == p {
        redraws += 1;
        if redraws > MAX_REDRAWS {
            return Err(RsaError::DistinctPrimeFailure(redraws));
        }
        q = derive_prime(provider, rng, x)?;
    }
    debug_assert!(is_prime_u64(p) && is_prime_u64(q));
    keypair_from_primes(p, q, x)
}

/// Primality re-check used by the acceptance suite: 40 probabilistic
/// rounds plus deterministic trial division below 10^7.
pub fn recheck_prime<R: Rng>(value: &BigUint, rng: &mut R) -> bool {
    if !miller_rabin(value, 40, rng) {
        return false;
    }
    match value.to_u64() {
        Some(v) if v < 10_000_000 => {
            let mut d = 2u64;
            while d * d <= v {
                if v % d == 0 {
                    return false;
                }
                d += 1;
            }
            v >= 2
        }
        _ => true,
    }
}

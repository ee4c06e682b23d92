use crate::keys::RsaKeyPair;
use crate::RsaError;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Square-and-multiply modular exponentiation. Kept explicit so tests
/// can compare it against a naive repeated-multiplication oracle.
pub fn modexp(base: &BigUint, exponent: &BigUint, modulus: &BigUint) -> BigUint {
    if modulus.is_one() {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    let mut base = base % modulus;
    for bit in 0..exponent.bits() {
        if exponent.bit(bit) {
            acc = &acc * &base % modulus;
        }
        base = &base * &base % modulus;
    }
    acc
}

/// c = m^e mod n. Unpadded by design; requires m < n.
pub fn encrypt(m: &BigUint, e: &BigUint, n: &BigUint) -> Result<BigUint, RsaError> {
    if m >= n {
        return Err(RsaError::MessageTooLarge);
    }
    Ok(modexp(m, e, n))
}

/// m = c^d mod n.
pub fn decrypt(c: &BigUint, d: &BigUint, n: &BigUint) -> Result<BigUint, RsaError> {
    if c >= n {
        return Err(RsaError::MessageTooLarge);
    }
    Ok(modexp(c, d, n))
}

/// A byte string encrypted block by block. `plain_len` restores exact
/// length on decryption; `blocks` hold fixed-width big-endian residues.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CipherBlob {
    pub plain_len: usize,
    pub blocks: Vec<Vec<u8>>,
}

impl CipherBlob {
    /// Lowercase hex of all blocks concatenated.
    pub fn to_hex(&self) -> String {
        let mut out = String::new();
        for block in &self.blocks {
            out.push_str(&hex::encode(block));
        }
        out
    }
}

fn block_widths(n: &BigUint) -> Result<(usize, usize), RsaError> {
    if *n <= BigUint::from(256u32) {
        return Err(RsaError::ModulusTooSmall);
    }
    let bits = n.bits() as usize;
    let plain = (bits - 1) / 8; // strictly below n for any byte pattern
    let cipher = bits.div_ceil(8);
    Ok((plain, cipher))
}

/// Chunks the plaintext and encrypts each chunk independently.
pub fn encrypt_blob(bytes: &[u8], keypair: &RsaKeyPair) -> Result<CipherBlob, RsaError> {
    let (plain_width, cipher_width) = block_widths(&keypair.n)?;
    let mut blocks = Vec::with_capacity(bytes.len().div_ceil(plain_width.max(1)));
    for chunk in bytes.chunks(plain_width) {
        let m = BigUint::from_bytes_be(chunk);
        let c = encrypt(&m, &keypair.e, &keypair.n)?;
        let mut raw = c.to_bytes_be();
        let mut padded = vec![0u8; cipher_width - raw.len()];
        padded.append(&mut raw);
        blocks.push(padded);
    }
    Ok(CipherBlob { plain_len: bytes.len(), blocks })
}

/// Inverse of `encrypt_blob`; restores the exact original byte string.
pub fn decrypt_blob(blob: &CipherBlob, keypair: &RsaKeyPair) -> Result<Vec<u8>, RsaError> {
    let (plain_width, cipher_width) = block_widths(&keypair.n)?;
    let mut out = Vec::with_capacity(blob.plain_len);
    let mut remaining = blob.plain_len;
    for block in &blob.blocks {
        if block.len() != cipher_width {
            return Err(RsaError::BadCiphertextLength(block.len(), cipher_width));
        }
        let c = BigUint::from_bytes_be(block);
        let m = decrypt(&c, &keypair.d, &keypair.n)?;
        let width = remaining.min(plain_width);
        let raw = m.to_bytes_be();
        if raw.len() > width {
            return Err(RsaError::BadCiphertextLength(raw.len(), width));
        }
        // leading zero bytes of the chunk do not survive the integer view
        out.extend(std::iter::repeat_n(0u8, width - raw.len()));
        out.extend_from_slice(&raw);
        remaining -= width;
    }
    if remaining != 0 {
        return Err(RsaError::BadCiphertextLength(out.len(), blob.plain_len));
    }
    Ok(out)
}

use crate::keys::RsaKeyPair;
use crate::RsaError;
use chrono::{DateTime, Utc};
use num_bigint::BigUint;
use std::path::Path;

const FORMAT_HEADER: &str = "siren-rsa-key v1";

/// Writes a keypair as a versioned `key value` text file. The file
/// carries the private exponent, so permissions are restricted to the
/// owner on unix.
pub fn save_keypair(path: &Path, keypair: &RsaKeyPair) -> Result<(), RsaError> {
    keypair.validate()?;
    let mut out = String::new();
    out.push_str(FORMAT_HEADER);
    out.push('\n');
    out.push_str(&format!("p {}\n", keypair.p));
    out.push_str(&format!("q {}\n", keypair.q));
    out.push_str(&format!("n {}\n", keypair.n));
    out.push_str(&format!("e {}\n", keypair.e));
    out.push_str(&format!("d {}\n", keypair.d));
    out.push_str(&format!("x {}\n", keypair.multiplier_x));
    out.push_str(&format!("created {}\n", Utc::now().to_rfc3339()));
    std::fs::write(path, out)?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        std::fs::set_permissions(path, std::fs::Permissions::from_mode(0o600))?;
    }
    Ok(())
}

/// Reads a keypair back and re-validates every invariant.
pub fn load_keypair(path: &Path) -> Result<RsaKeyPair, RsaError> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == FORMAT_HEADER => {}
        other => {
            return Err(RsaError::KeyFile(format!(
                "unrecognized header {:?}, expected {FORMAT_HEADER:?}",
                other.unwrap_or("")
            )))
        }
    }
    let mut p = None;
    let mut q = None;
    let mut e = None;
    let mut d = None;
    let mut n = None;
    let mut x = None;
    let mut created = None;
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once(' ')
            .ok_or_else(|| RsaError::KeyFile(format!("malformed line {line:?}")))?;
        let big = |v: &str| -> Result<BigUint, RsaError> {
            v.parse().map_err(|_| RsaError::KeyFile(format!("bad integer for {key}")))
        };
        match key {
            "p" => p = Some(big(value)?),
            "q" => q = Some(big(value)?),
            "n" => n = Some(big(value)?),
            "e" => e = Some(big(value)?),
            "d" => d = Some(big(value)?),
            "x" => {
                x = Some(
                    value
                        .parse::<u64>()
                        .map_err(|_| RsaError::KeyFile("bad multiplier x".into()))?,
                )
            }
            "created" => {
                created = Some(
                    DateTime::parse_from_rfc3339(value)
                        .map_err(|_| RsaError::KeyFile("bad created timestamp".into()))?,
                )
            }
            other => return Err(RsaError::KeyFile(format!("unknown field {other:?}"))),
        }
    }
    let missing = |name: &str| RsaError::KeyFile(format!("missing field {name}"));
    created.ok_or_else(|| missing("created"))?;
    let p = p.ok_or_else(|| missing("p"))?;
    let q = q.ok_or_else(|| missing("q"))?;
    let keypair = RsaKeyPair {
        phi: (&p - 1u32) * (&q - 1u32),
        p,
        q,
        n: n.ok_or_else(|| missing("n"))?,
        e: e.ok_or_else(|| missing("e"))?,
        d: d.ok_or_else(|| missing("d"))?,
        multiplier_x: x.ok_or_else(|| missing("x"))?,
    };
    keypair.validate()?;
    Ok(keypair)
}

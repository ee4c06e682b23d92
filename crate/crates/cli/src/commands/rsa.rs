use crate::config::RunConfig;
use anyhow::{bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use siren_prob_rsa::{
    decrypt_blob, encrypt_blob, generate_keypair, load_keypair, save_keypair, CipherBlob,
    FixtureProvider, LiveProvider, DEFAULT_MULTIPLIER,
};
use std::path::PathBuf;

pub fn keygen(
    config: &mut RunConfig,
    out: PathBuf,
    x: Option<u64>,
    entropy: Option<String>,
    cities: Option<PathBuf>,
    seed: u64,
) -> Result<()> {
    let x = config.resolve(x, "x", DEFAULT_MULTIPLIER)?;
    let entropy = config.resolve(entropy, "entropy", "fixture".to_string())?;
    config.note("key_out", out.display());
    config.echo();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let keypair = match entropy.as_str() {
        "fixture" => {
            let provider = match &cities {
                Some(path) => FixtureProvider::from_file(path)?,
                None => FixtureProvider::bundled(),
            };
            generate_keypair(&provider, &mut rng, x)?
        }
        "live" => {
            let api_key = std::env::var("OPENWEATHER_API_KEY")
                .context("live entropy requires OPENWEATHER_API_KEY")?;
            let city_names = match &cities {
                Some(path) => std::fs::read_to_string(path)?
                    .lines()
                    .map(|l| l.split(',').next().unwrap_or(l).trim().to_string())
                    .filter(|l| !l.is_empty() && !l.starts_with('#'))
                    .collect(),
                None => vec![
                    "Chennai".to_string(),
                    "Mumbai".to_string(),
                    "Delhi".to_string(),
                    "Kolkata".to_string(),
                    "Bengaluru".to_string(),
                ],
            };
            let provider = LiveProvider::new(city_names, api_key)?;
            generate_keypair(&provider, &mut rng, x)?
        }
        other => bail!("unknown entropy mode {other:?} (expected fixture or live)"),
    };
    save_keypair(&out, &keypair)?;
    println!("n={} e={} bits={}", keypair.n, keypair.e, keypair.n.bits());
    Ok(())
}

pub fn encrypt_file(
    config: &mut RunConfig,
    key: PathBuf,
    input: PathBuf,
    output: PathBuf,
) -> Result<()> {
    config.note("key", key.display());
    config.echo();
    let keypair = load_keypair(&key)?;
    let plaintext =
        std::fs::read(&input).with_context(|| format!("cannot read {}", input.display()))?;
    let blob = encrypt_blob(&plaintext, &keypair)?;
    std::fs::write(&output, serde_json::to_vec_pretty(&blob)?)?;
    println!("{} bytes -> {} blocks", blob.plain_len, blob.blocks.len());
    Ok(())
}

pub fn decrypt_file(
    config: &mut RunConfig,
    key: PathBuf,
    input: PathBuf,
    output: PathBuf,
) -> Result<()> {
    config.note("key", key.display());
    config.echo();
    let keypair = load_keypair(&key)?;
    let text =
        std::fs::read(&input).with_context(|| format!("cannot read {}", input.display()))?;
    let blob: CipherBlob =
        serde_json::from_slice(&text).context("input is not an encrypted blob file")?;
    let plaintext = decrypt_blob(&blob, &keypair)?;
    std::fs::write(&output, &plaintext)?;
    println!("{} blocks -> {} bytes", blob.blocks.len(), plaintext.len());
    Ok(())
}

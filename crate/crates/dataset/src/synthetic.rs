//! Deterministic synthetic corpus generator. Produces URLs with the
//! lexical texture of each class at the imbalance the real corpus shows
//! (benign majority, then defacement, phishing, malware). Used for demos
//! and for desk-scale runs when the real corpus CSV is not on disk.

use crate::{UrlClass, UrlRecord};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

const WORDS: &[&str] = &[
    "news", "shop", "blog", "media", "cloud", "portal", "home", "store", "forum", "wiki",
    "photo", "music", "travel", "sport", "tech", "daily", "world", "green", "alpha", "prime",
    "delta", "nova", "metro", "civic", "pixel", "orbit", "lumen", "cedar", "maple", "river",
];

const BRANDS: &[&str] = &["paypal", "amazon", "apple", "netflix", "chase", "微bank", "ebay", "office"];

const ACTIONS: &[&str] = &["login", "verify", "secure", "update", "confirm", "account", "signin", "webscr"];

const SHORTENERS: &[&str] = &["bit.ly", "tinyurl.com", "goo.gl", "is.gd"];

const CMS_PARTS: &[&str] = &["content", "option", "task", "view", "layout", "itemid", "lang"];

fn word(rng: &mut ChaCha20Rng) -> &'static str {
    WORDS.choose(rng).unwrap()
}

fn benign(rng: &mut ChaCha20Rng) -> String {
    let scheme = if rng.random_bool(0.7) { "https://" } else { "http://" };
    let www = if rng.random_bool(0.5) { "www." } else { "" };
    let tld = ["com", "org", "net", "io"].choose(rng).unwrap();
    let mut url = format!("{scheme}{www}{}{}.{tld}", word(rng), word(rng));
    for _ in 0..rng.random_range(0..3usize) {
        url.push('/');
        url.push_str(word(rng));
    }
    if rng.random_bool(0.4) {
        url.push_str(&format!("/{}.html", word(rng)));
    }
    url
}

fn defacement(rng: &mut ChaCha20Rng) -> String {
    let tld = ["com", "org", "id", "br", "tr"].choose(rng).unwrap();
    let mut url = format!(
        "http://{}.{}.{tld}/index.php?option=com_{}",
        word(rng),
        word(rng),
        word(rng)
    );
    for _ in 0..rng.random_range(2..5usize) {
        url.push_str(&format!(
            "&{}={}",
            CMS_PARTS.choose(rng).unwrap(),
            rng.random_range(1..900)
        ));
    }
    url
}

fn phishing(rng: &mut ChaCha20Rng) -> String {
    if rng.random_bool(0.15) {
        // shortener redirect
        let code: String = (0..7)
            .map(|_| {
                let chars = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
                chars.as_bytes()[rng.random_range(0..chars.len())] as char
            })
            .collect();
        return format!("http://{}/{code}", SHORTENERS.choose(rng).unwrap());
    }
    let brand = BRANDS.choose(rng).unwrap();
    let tld = ["com", "net", "info", "xyz", "top"].choose(rng).unwrap();
    let mut url = format!(
        "http://{brand}.com.{}-{}.{}.{tld}/{}/{}",
        word(rng),
        ACTIONS.choose(rng).unwrap(),
        word(rng),
        ACTIONS.choose(rng).unwrap(),
        ACTIONS.choose(rng).unwrap()
    );
    if rng.random_bool(0.3) {
        url = url.replacen("http://", &format!("http://{}@", word(rng)), 1);
    }
    if rng.random_bool(0.5) {
        url.push_str(&format!("?session={}", rng.random_range(10_000..10_000_000)));
    }
    url
}

fn malware(rng: &mut ChaCha20Rng) -> String {
    let host = if rng.random_bool(0.2) {
        format!("0x{:08X}", rng.random_range(0x0100_0000u32..0xDFFF_FFFF))
    } else {
        format!(
            "{}.{}.{}.{}",
            rng.random_range(1..224),
            rng.random_range(0..256),
            rng.random_range(0..256),
            rng.random_range(1..255)
        )
    };
    let port = if rng.random_bool(0.6) {
        format!(":{}", rng.random_range(1024..65535))
    } else {
        String::new()
    };
    let payload: String = (0..rng.random_range(6..14usize))
        .map(|_| {
            let chars = "0123456789abcdef";
            chars.as_bytes()[rng.random_range(0..chars.len())] as char
        })
        .collect();
    let ext = ["exe", "scr", "dll", "bin"].choose(rng).unwrap();
    format!("http://{host}{port}/{payload}.{ext}")
}

/// Generate `n` labelled records with a fixed seed. Same (n, seed) gives
/// the same corpus.
pub fn generate(n: usize, seed: u64) -> Vec<UrlRecord> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let counts = [
        (UrlClass::Benign, n * 55 / 100),
        (UrlClass::Defacement, n * 24 / 100),
        (UrlClass::Phishing, n * 14 / 100),
    ];
    let mut records: Vec<UrlRecord> = Vec::with_capacity(n);
    for (label, count) in counts {
        for _ in 0..count {
            let url = match label {
                UrlClass::Benign => benign(&mut rng),
                UrlClass::Defacement => defacement(&mut rng),
                UrlClass::Phishing => phishing(&mut rng),
                UrlClass::Malware => unreachable!(),
            };
            records.push(UrlRecord { url, label });
        }
    }
    while records.len() < n {
        records.push(UrlRecord { url: malware(&mut rng), label: UrlClass::Malware });
    }
    records.shuffle(&mut rng);
    records
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        assert_eq!(generate(500, 1), generate(500, 1));
        assert_ne!(generate(500, 1), generate(500, 2));
    }

    #[test]
    fn benign_is_majority() {
        let records = generate(2000, 3);
        let dist = crate::class_distribution(&records).unwrap();
        assert_eq!(dist.majority_class(), UrlClass::Benign);
        assert_eq!(dist.total, 2000);
        // every class present
        assert!(dist.counts.iter().all(|&c| c > 0));
    }
}

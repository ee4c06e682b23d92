use crate::{
    char_stats, count_symbols, decompose_url, detect_credentials, detect_ip, is_shortened,
    tld_count, UrlFeatureError, SYMBOL_COUNT,
};

/// Dimension of the classifier input.
pub const FEATURE_DIM: usize = 68;

/// The fixed 68-entry feature vector. Layout:
///   [ 0..16)  symbol counts over the raw URL, in `SYMBOLS` order
///   [16..20)  raw URL length / digits / letters / vowels
///   [20..28)  https, credentials, shortener, ipv4, ipv4_port, hex_ip, ipv6, tld_count
///   [28..44)  symbol counts over the host
///   [44..48)  host length / digits / letters / vowels
///   [48..64)  symbol counts over the path
///   [64..68)  path length / digits / letters / vowels
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    values: [f64; FEATURE_DIM],
}

impl FeatureVector {
    pub fn values(&self) -> &[f64; FEATURE_DIM] {
        &self.values
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        feature_names().iter().position(|&n| n == name).map(|i| self.values[i])
    }
}

impl AsRef<[f64]> for FeatureVector {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

fn symbol_feature_names(prefix: &str) -> Vec<String> {
    const NAMES: [&str; SYMBOL_COUNT] = [
        "dot", "hyphen", "underscore", "slash", "question", "equals", "at", "ampersand",
        "exclamation", "comma", "tilde", "asterisk", "hash", "dollar", "percent", "plus",
    ];
    NAMES.iter().map(|n| format!("{prefix}_count_{n}")).collect()
}

/// Names of all 68 features, index-aligned with `FeatureVector`.
pub fn feature_names() -> &'static [&'static str; FEATURE_DIM] {
    use std::sync::OnceLock;
    static NAMES: OnceLock<[&'static str; FEATURE_DIM]> = OnceLock::new();
    NAMES.get_or_init(|| {
        let mut out: Vec<String> = Vec::with_capacity(FEATURE_DIM);
        out.extend(symbol_feature_names("url"));
        out.extend(["url_length", "url_digits", "url_letters", "url_vowels"].map(String::from));
        out.extend(
            [
                "https_flag",
                "credentials_flag",
                "shortener_flag",
                "ipv4_flag",
                "ipv4_port_flag",
                "hex_ip_flag",
                "ipv6_flag",
                "tld_count",
            ]
            .map(String::from),
        );
        out.extend(symbol_feature_names("host"));
        out.extend(["host_length", "host_digits", "host_letters", "host_vowels"].map(String::from));
        out.extend(symbol_feature_names("path"));
        out.extend(["path_length", "path_digits", "path_letters", "path_vowels"].map(String::from));
        let leaked: Vec<&'static str> = out.into_iter().map(|s| &*s.leak()).collect();
        leaked.try_into().unwrap()
    })
}

/// Machine-readable layout manifest: one `index<TAB>name` line per feature.
pub fn layout_manifest() -> String {
    let mut out = String::new();
    for (i, name) in feature_names().iter().enumerate() {
        out.push_str(&format!("{i}\t{name}\n"));
    }
    out
}

/// FNV-1a 64 over the manifest; persisted in model files so a model is
/// never applied to a different layout.
pub fn layout_hash() -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for b in layout_manifest().bytes() {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Extract the deterministic 68-dimensional feature vector for a raw URL.
pub fn extract_features(raw: &str) -> Result<FeatureVector, UrlFeatureError> {
    let parts = decompose_url(raw)?;
    let mut values = [0f64; FEATURE_DIM];
    let mut idx = 0usize;

    let mut push = |vals: &mut [f64; FEATURE_DIM], v: f64| {
        vals[idx] = v;
        idx += 1;
    };

    let raw_str = parts.raw.as_str();
    for c in count_symbols(Some(raw_str)) {
        push(&mut values, c as f64);
    }
    let url_stats = char_stats(Some(raw_str));
    push(&mut values, url_stats.length as f64);
    push(&mut values, url_stats.digits as f64);
    push(&mut values, url_stats.letters as f64);
    push(&mut values, url_stats.vowels as f64);

    let https = matches!(parts.protocol.as_deref(), Some(p) if p.eq_ignore_ascii_case("https"));
    push(&mut values, https as u8 as f64);
    push(&mut values, detect_credentials(raw_str) as f64);
    push(&mut values, is_shortened(parts.host.as_deref()) as f64);

    // re-attach the port so the ipv4_port shape is visible
    let host_for_ip = match (&parts.host, parts.port) {
        (Some(h), Some(p)) => Some(format!("{h}:{p}")),
        (Some(h), None) => Some(h.clone()),
        (None, _) => None,
    };
    let flags = detect_ip(host_for_ip.as_deref());
    push(&mut values, flags.ipv4 as f64);
    push(&mut values, flags.ipv4_port as f64);
    push(&mut values, flags.hex_ip as f64);
    push(&mut values, flags.ipv6 as f64);
    push(&mut values, tld_count(parts.host.as_deref()) as f64);

    for c in count_symbols(parts.host.as_deref()) {
        push(&mut values, c as f64);
    }
    let host_stats = char_stats(parts.host.as_deref());
    push(&mut values, host_stats.length as f64);
    push(&mut values, host_stats.digits as f64);
    push(&mut values, host_stats.letters as f64);
    push(&mut values, host_stats.vowels as f64);

    for c in count_symbols(Some(parts.path.as_str())) {
        push(&mut values, c as f64);
    }
    let path_stats = char_stats(Some(parts.path.as_str()));
    push(&mut values, path_stats.length as f64);
    push(&mut values, path_stats.digits as f64);
    push(&mut values, path_stats.letters as f64);
    push(&mut values, path_stats.vowels as f64);

    debug_assert_eq!(idx, FEATURE_DIM);
    Ok(FeatureVector { values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_is_68_unique_names() {
        let names = feature_names();
        assert_eq!(names.len(), FEATURE_DIM);
        let set: std::collections::HashSet<_> = names.iter().collect();
        assert_eq!(set.len(), FEATURE_DIM);
    }

    #[test]
    fn named_entries_for_plain_url() {
        let v = extract_features("http://example.com/login").unwrap();
        assert_eq!(v.get("url_length"), Some(24.0));
        assert_eq!(v.get("url_count_slash"), Some(3.0));
        assert_eq!(v.get("url_count_dot"), Some(1.0));
        assert_eq!(v.get("url_vowels"), Some(6.0));
        assert_eq!(v.get("host_length"), Some(11.0));
        assert_eq!(v.get("path_length"), Some(6.0));
        assert_eq!(v.get("https_flag"), Some(0.0));
        for f in ["ipv4_flag", "ipv4_port_flag", "hex_ip_flag", "ipv6_flag"] {
            assert_eq!(v.get(f), Some(0.0), "{f}");
        }
        assert_eq!(v.get("tld_count"), Some(1.0));
    }

    #[test]
    fn empty_input_errors() {
        assert!(extract_features("").is_err());
    }

    #[test]
    fn shortener_and_https_flags() {
        let v = extract_features("https://bit.ly/x").unwrap();
        assert_eq!(v.get("shortener_flag"), Some(1.0));
        assert_eq!(v.get("https_flag"), Some(1.0));
    }

    #[test]
    fn manifest_round_trips_through_hash() {
        assert_eq!(layout_hash(), layout_hash());
        assert!(layout_manifest().lines().count() == FEATURE_DIM);
    }
}

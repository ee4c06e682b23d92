use std::collections::HashSet;
use std::io;
use std::path::Path;
use std::sync::LazyLock;

/// A lowercase token set loaded from a one-token-per-line file.
/// `#` starts a comment; blank lines are ignored.
#[derive(Debug, Clone)]
pub struct TokenList {
    tokens: HashSet<String>,
}

impl TokenList {
    pub fn parse(text: &str) -> TokenList {
        let tokens = text
            .lines()
            .map(|line| line.split('#').next().unwrap_or("").trim())
            .filter(|t| !t.is_empty())
            .map(|t| t.to_ascii_lowercase())
            .collect();
        TokenList { tokens }
    }

    pub fn from_file(path: &Path) -> io::Result<TokenList> {
        Ok(TokenList::parse(&std::fs::read_to_string(path)?))
    }

    pub fn contains(&self, token: &str) -> bool {
        self.tokens.contains(&token.to_ascii_lowercase())
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

static TLDS: LazyLock<TokenList> = LazyLock::new(|| TokenList::parse(include_str!("../data/tlds.txt")));
static SHORTENERS: LazyLock<TokenList> =
    LazyLock::new(|| TokenList::parse(include_str!("../data/shorteners.txt")));

pub fn bundled_tlds() -> &'static TokenList {
    &TLDS
}

pub fn bundled_shorteners() -> &'static TokenList {
    &SHORTENERS
}

/// Number of dot-separated labels of `host` that are known TLD tokens.
/// Values above 1 flag impersonation patterns like `paypal.com.verify.net`.
pub fn tld_count(host: Option<&str>) -> u32 {
    let Some(host) = host else { return 0 };
    host.split('.').filter(|label| TLDS.contains(label)).count() as u32
}

/// 1 iff `host` is a known URL-shortener service (case-insensitive).
pub fn is_shortened(host: Option<&str>) -> u8 {
    match host {
        Some(host) if SHORTENERS.contains(host) => 1,
        _ => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tld_counting() {
        assert_eq!(tld_count(Some("example.com")), 1);
        assert_eq!(tld_count(Some("paypal.com.verify.net")), 2);
        assert_eq!(tld_count(None), 0);
        assert_eq!(tld_count(Some("localhost")), 0);
    }

    #[test]
    fn shortener_lookup_is_case_insensitive() {
        assert_eq!(is_shortened(Some("bit.ly")), 1);
        assert_eq!(is_shortened(Some("TINYURL.COM")), 1);
        assert_eq!(is_shortened(Some("example.com")), 0);
        assert_eq!(is_shortened(None), 0);
    }

    #[test]
    fn parse_skips_comments_and_blanks() {
        let list = TokenList::parse("# header\n\nfoo\nBAR # trailing\n");
        assert_eq!(list.len(), 2);
        assert!(list.contains("foo"));
        assert!(list.contains("bar"));
    }
}

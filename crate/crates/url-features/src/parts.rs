use crate::UrlFeatureError;

/// Components of a URL after RFC-3986-style splitting. Absent components
/// are `None`, never empty strings.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UrlParts {
    pub protocol: Option<String>,
    pub host: Option<String>,
    pub port: Option<u16>,
    pub path: String,
    pub params: Option<String>,
    pub query: Option<String>,
    pub fragment: Option<String>,
    pub raw: String,
}

/// Split a raw URL into its components. Scheme-less inputs are parsed
/// host-first; inputs with no recognizable host come back with
/// `host: None` and the whole string as the path. Only empty or
/// whitespace-only input is rejected.
pub fn decompose_url(raw: &str) -> Result<UrlParts, UrlFeatureError> {
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return Err(UrlFeatureError::EmptyInput);
    }

    let mut parts = UrlParts {
        raw: trimmed.to_string(),
        ..UrlParts::default()
    };

    let mut rest = trimmed;

    // fragment and query come off the tail first; they may contain
    // anything except their own delimiter
    if let Some(idx) = rest.find('#') {
        let frag = &rest[idx + 1..];
        if !frag.is_empty() {
            parts.fragment = Some(frag.to_string());
        }
        rest = &rest[..idx];
    }
    if let Some(idx) = rest.find('?') {
        let q = &rest[idx + 1..];
        if !q.is_empty() {
            parts.query = Some(q.to_string());
        }
        rest = &rest[..idx];
    }

    if let Some(scheme_end) = scheme_len(rest) {
        parts.protocol = Some(rest[..scheme_end].to_string());
        rest = &rest[scheme_end + 1..];
        if let Some(stripped) = rest.strip_prefix("//") {
            let (authority, path) = split_authority(stripped);
            apply_authority(&mut parts, authority);
            set_path(&mut parts, path);
        } else {
            // opaque form like mailto:user@host, everything is path
            set_path(&mut parts, rest);
        }
    } else if rest.starts_with('/') || !looks_like_authority(rest) {
        set_path(&mut parts, rest);
    } else {
        // scheme-less, host-first (the common corpus shape)
        let (authority, path) = split_authority(rest);
        apply_authority(&mut parts, authority);
        set_path(&mut parts, path);
    }

    Ok(parts)
}

/// Length of a valid scheme prefix (`ALPHA *( ALPHA / DIGIT / "+" / "-" / "." )`)
/// terminated by `:`, or None.
fn scheme_len(s: &str) -> Option<usize> {
    let colon = s.find(':')?;
    if colon == 0 {
        return None;
    }
    let candidate = &s[..colon];
    let mut chars = candidate.chars();
    if !chars.next().is_some_and(|c| c.is_ascii_alphabetic()) {
        return None;
    }
    if chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.')) {
        Some(colon)
    } else {
        None
    }
}

fn split_authority(s: &str) -> (&str, &str) {
    match s.find('/') {
        Some(idx) => (&s[..idx], &s[idx..]),
        None => (s, ""),
    }
}

/// An input qualifies for host-first parsing unless its leading segment
/// is clearly not a hostname (whitespace or empty).
fn looks_like_authority(s: &str) -> bool {
    let (authority, _) = split_authority(s);
    !authority.is_empty() && !authority.chars().any(char::is_whitespace)
}

fn apply_authority(parts: &mut UrlParts, authority: &str) {
    // userinfo is dropped from the host; detect_credentials sees it in raw
    let host_port = match authority.rfind('@') {
        Some(idx) => &authority[idx + 1..],
        None => authority,
    };
    let (host, port) = split_port(host_port);
    if !host.is_empty() {
        parts.host = Some(host.to_string());
    }
    parts.port = port;
}

fn split_port(host_port: &str) -> (&str, Option<u16>) {
    // bracketed IPv6 literals keep their colons
    if host_port.starts_with('[') {
        if let Some(close) = host_port.find(']') {
            let tail = &host_port[close + 1..];
            if let Some(p) = tail.strip_prefix(':') {
                if let Ok(port) = p.parse::<u16>() {
                    return (&host_port[..close + 1], Some(port));
                }
            }
            return (host_port, None);
        }
        return (host_port, None);
    }
    if let Some(idx) = host_port.rfind(':') {
        let p = &host_port[idx + 1..];
        if !p.is_empty() {
            if let Ok(port) = p.parse::<u16>() {
                return (&host_port[..idx], Some(port));
            }
        }
    }
    (host_port, None)
}

fn set_path(parts: &mut UrlParts, path: &str) {
    // RFC 3986 path parameters after the first ';'
    match path.find(';') {
        Some(idx) => {
            parts.path = path[..idx].to_string();
            let p = &path[idx + 1..];
            if !p.is_empty() {
                parts.params = Some(p.to_string());
            }
        }
        None => parts.path = path.to_string(),
    }
}

use std::net::Ipv6Addr;

/// Address-shape flags for a host. At most one of `ipv4`, `hex_ip`,
/// `ipv6` is set for any host; `ipv4_port` additionally requires a
/// numeric port suffix on an IPv4 host.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IpFlags {
    pub ipv4: u8,
    pub ipv4_port: u8,
    pub hex_ip: u8,
    pub ipv6: u8,
}

impl IpFlags {
    pub const ZERO: IpFlags = IpFlags { ipv4: 0, ipv4_port: 0, hex_ip: 0, ipv6: 0 };
}

/// Classify a host string into the four IP address shapes. Total: any
/// input (including None) yields flags, never an error.
pub fn detect_ip(host: Option<&str>) -> IpFlags {
    let Some(host) = host else { return IpFlags::ZERO };
    let host = host.trim();
    if host.is_empty() {
        return IpFlags::ZERO;
    }

    if is_dotted_quad(host) {
        return IpFlags { ipv4: 1, ..IpFlags::ZERO };
    }
    if let Some((addr, port)) = host.rsplit_once(':') {
        if is_dotted_quad(addr) && port.parse::<u16>().is_ok() {
            return IpFlags { ipv4: 1, ipv4_port: 1, ..IpFlags::ZERO };
        }
    }
    if is_hex_ip(host) {
        return IpFlags { hex_ip: 1, ..IpFlags::ZERO };
    }
    let inner = host.strip_prefix('[').and_then(|h| h.strip_suffix(']')).unwrap_or(host);
    if inner.contains(':') && inner.parse::<Ipv6Addr>().is_ok() {
        return IpFlags { ipv6: 1, ..IpFlags::ZERO };
    }
    IpFlags::ZERO
}

/// Four dot-separated runs of 1-3 digits, each ≤ 255. Leading zeros are
/// accepted (attackers use them).
fn is_dotted_quad(s: &str) -> bool {
    let mut octets = 0usize;
    for part in s.split('.') {
        if part.is_empty() || part.len() > 3 || !part.bytes().all(|b| b.is_ascii_digit()) {
            return false;
        }
        if part.parse::<u16>().map_or(true, |v| v > 255) {
            return false;
        }
        octets += 1;
    }
    octets == 4
}

/// Whole-host hexadecimal IP: `0x` followed by 1-8 hex digits.
fn is_hex_ip(s: &str) -> bool {
    let Some(digits) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) else {
        return false;
    };
    !digits.is_empty() && digits.len() <= 8 && digits.bytes().all(|b| b.is_ascii_hexdigit())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_ipv4() {
        assert_eq!(detect_ip(Some("192.168.0.1")), IpFlags { ipv4: 1, ..IpFlags::ZERO });
    }

    #[test]
    fn ipv4_with_port() {
        assert_eq!(
            detect_ip(Some("10.0.0.1:8080")),
            IpFlags { ipv4: 1, ipv4_port: 1, ..IpFlags::ZERO }
        );
    }

    #[test]
    fn hex_ip() {
        // 0xC0A80001 == 192.168.0.1
        assert_eq!(detect_ip(Some("0xC0A80001")), IpFlags { hex_ip: 1, ..IpFlags::ZERO });
    }

    #[test]
    fn bracketed_ipv6() {
        assert_eq!(detect_ip(Some("[2001:db8::1]")), IpFlags { ipv6: 1, ..IpFlags::ZERO });
    }

    #[test]
    fn hostname_is_all_zero() {
        assert_eq!(detect_ip(Some("example.com")), IpFlags::ZERO);
        assert_eq!(detect_ip(None), IpFlags::ZERO);
    }

    #[test]
    fn out_of_range_octet_rejected() {
        assert_eq!(detect_ip(Some("256.1.1.1")), IpFlags::ZERO);
        assert_eq!(detect_ip(Some("1.2.3")), IpFlags::ZERO);
        assert_eq!(detect_ip(Some("1.2.3.4.5")), IpFlags::ZERO);
    }

    #[test]
    fn leading_zero_octets_accepted() {
        assert_eq!(detect_ip(Some("010.001.002.003")), IpFlags { ipv4: 1, ..IpFlags::ZERO });
    }

    #[test]
    fn at_most_one_shape_fires() {
        for h in ["192.168.0.1", "0xFF", "[::1]", "8.8.8.8:53", "a.b.c"] {
            let f = detect_ip(Some(h));
            assert!(f.ipv4 + f.hex_ip + f.ipv6 <= 1, "host {h}");
        }
    }
}

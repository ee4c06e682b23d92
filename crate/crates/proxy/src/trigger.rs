use crate::classify::{Action, Verdict};
use std::net::{SocketAddr, UdpSocket};

/// Fires the honeypot activation datagram for a trap verdict. One-way:
/// nothing is awaited, and delivery failure only produces a local
/// warning. Returns whether a datagram left the socket.
pub fn trigger_honeypot(verdict: &Verdict, control_endpoint: SocketAddr) -> bool {
    debug_assert_eq!(verdict.action, Action::Trap);
    let message = format!("ACTIVATE {}\n", verdict.class.name());
    let sent = UdpSocket::bind("0.0.0.0:0")
        .and_then(|socket| socket.send_to(message.as_bytes(), control_endpoint));
    match sent {
        Ok(_) => {
            log::info!("honeypot trigger sent for {} ({})", verdict.url, verdict.class.name());
            true
        }
        Err(err) => {
            log::warn!("honeypot trigger to {control_endpoint} failed: {err}");
            false
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use siren_dataset::UrlClass;
    use std::time::Duration;

    fn trap_verdict() -> Verdict {
        Verdict {
            url: "http://198.51.100.7/x.exe".into(),
            class: UrlClass::Malware,
            probabilities: [0.01, 0.01, 0.01, 0.97],
            action: Action::Trap,
            model_version: "test".into(),
        }
    }

    #[test]
    fn exactly_one_datagram_reaches_the_listener() {
        let listener = UdpSocket::bind("127.0.0.1:0").unwrap();
        listener.set_read_timeout(Some(Duration::from_secs(2))).unwrap();
        assert!(trigger_honeypot(&trap_verdict(), listener.local_addr().unwrap()));
        let mut buf = [0u8; 128];
        let (len, _) = listener.recv_from(&mut buf).unwrap();
        assert_eq!(&buf[..len], b"ACTIVATE malware\n");
        listener.set_read_timeout(Some(Duration::from_millis(200))).unwrap();
        assert!(listener.recv_from(&mut buf).is_err(), "second datagram observed");
    }

    #[test]
    fn unreachable_endpoint_does_not_panic() {
        // port 9 on localhost is almost surely closed; UDP send still
        // succeeds locally, so just verify no panic either way
        let endpoint: SocketAddr = "127.0.0.1:9".parse().unwrap();
        let _ = trigger_honeypot(&trap_verdict(), endpoint);
    }
}

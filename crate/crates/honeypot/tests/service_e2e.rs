use siren_honeypot::{export_sessions, spawn, EventKind, HoneypotConfig};
use std::io::{BufRead, BufReader, Write};
use std::net::{TcpStream, UdpSocket};
use std::time::Duration;

struct Client {
    writer: TcpStream,
    reader: BufReader<TcpStream>,
}

impl Client {
    fn connect(addr: std::net::SocketAddr) -> Client {
        let stream = TcpStream::connect(addr).unwrap();
        stream.set_read_timeout(Some(Duration::from_secs(5))).unwrap();
        let reader = BufReader::new(stream.try_clone().unwrap());
        let mut client = Client { writer: stream, reader };
        client.read_until_prompt(); // banner + first prompt
        client
    }

    fn read_until_prompt(&mut self) -> String {
        let mut out = Vec::new();
        loop {
            let mut byte = [0u8; 1];
            std::io::Read::read_exact(&mut self.reader, &mut byte).unwrap();
            out.push(byte[0]);
            if out.ends_with(b"$ ") {
                break;
            }
        }
        String::from_utf8_lossy(&out[..out.len() - 2]).into_owned()
    }

    fn run(&mut self, command: &str) -> String {
        self.writer.write_all(format!("{command}\n").as_bytes()).unwrap();
        self.read_until_prompt()
    }

    fn exit(mut self) {
        let _ = self.writer.write_all(b"exit\n");
        let mut rest = String::new();
        let _ = self.reader.read_line(&mut rest);
    }
}

fn wait_for_log<F: Fn() -> bool>(ready: F) {
    for _ in 0..100 {
        if ready() {
            return;
        }
        std::thread::sleep(Duration::from_millis(20));
    }
    panic!("condition never became true");
}

#[test]
fn full_session_is_logged_and_control_stays_one_way() {
    let dir = tempfile::tempdir().unwrap();
    let handle = spawn(HoneypotConfig::for_test(dir.path().to_path_buf())).unwrap();

    let mut client = Client::connect(handle.shell_addr);
    assert_eq!(client.run("pwd"), "/home/admin\n");
    assert!(client.run("ls").contains("secrets/"));
    let first = client.run("cat secrets/passwords.txt");
    let second = client.run("cat secrets/passwords.txt");
    assert_ne!(first, second, "fresh keypair per protected read");
    assert!(first.trim().chars().all(|c| c.is_ascii_hexdigit()));

    // one-way capture harness: send controls, then verify that nothing
    // ever comes back on the datagram socket
    let control = UdpSocket::bind("127.0.0.1:0").unwrap();
    control.set_read_timeout(Some(Duration::from_millis(300))).unwrap();
    control.send_to(b"ENCRYPT_ALL\n", handle.control_addr).unwrap();
    control.send_to(b"FROBNICATE\n", handle.control_addr).unwrap();

    wait_for_log(|| {
        export_sessions(dir.path()).map(|a| {
            a.events.iter().any(|e| {
                e.kind == EventKind::ControlApplied && e.payload == "ENCRYPT_ALL"
            })
        }).unwrap_or(false)
    });

    let mut buf = [0u8; 64];
    assert!(
        control.recv_from(&mut buf).is_err(),
        "honeypot transmitted on the one-way channel"
    );

    // ENCRYPT_ALL took effect: the readme is now ciphertext
    let readme = client.run("cat readme.txt");
    assert!(!readme.contains("Internal file server"));
    assert!(readme.trim().chars().all(|c| c.is_ascii_hexdigit()));
    client.exit();

    wait_for_log(|| {
        export_sessions(dir.path())
            .map(|a| a.events.iter().any(|e| e.kind == EventKind::Disconnect))
            .unwrap_or(false)
    });
    handle.stop();

    let archive = export_sessions(dir.path()).unwrap();
    let connects =
        archive.events.iter().filter(|e| e.kind == EventKind::Connect).count();
    let disconnects =
        archive.events.iter().filter(|e| e.kind == EventKind::Disconnect).count();
    assert_eq!(connects, 1);
    assert_eq!(disconnects, 1);
    assert!(archive.manifest.command_histogram["cat"] >= 3);
    let dropped = archive
        .events
        .iter()
        .any(|e| e.kind == EventKind::ControlApplied && e.payload.starts_with("dropped:"));
    assert!(dropped, "malformed datagram must be logged");
}

#[test]
fn concurrent_sessions_get_ordered_independent_logs() {
    let dir = tempfile::tempdir().unwrap();
    let handle = spawn(HoneypotConfig::for_test(dir.path().to_path_buf())).unwrap();

    let addr = handle.shell_addr;
    let workers: Vec<_> = (0..4)
        .map(|i| {
            std::thread::spawn(move || {
                let mut client = Client::connect(addr);
                for _ in 0..5 {
                    assert_eq!(client.run("whoami"), "admin\n");
                    client.run(&format!("cd dir{i}"));
                }
                client.exit();
            })
        })
        .collect();
    for worker in workers {
        worker.join().unwrap();
    }
    wait_for_log(|| {
        export_sessions(dir.path())
            .map(|a| a.events.iter().filter(|e| e.kind == EventKind::Disconnect).count())
            .map(|n| n == 4)
            .unwrap_or(false)
    });
    handle.stop();

    let archive = export_sessions(dir.path()).unwrap();
    assert_eq!(archive.manifest.session_count, 4);
    for id in 1..=4u64 {
        let events: Vec<_> =
            archive.events.iter().filter(|e| e.session_id == id).collect();
        assert_eq!(events.first().unwrap().kind, EventKind::Connect);
        assert_eq!(events.last().unwrap().kind, EventKind::Disconnect);
        assert!(events.windows(2).all(|w| w[0].timestamp <= w[1].timestamp));
    }
}

#[test]
fn shutdown_verb_stops_the_service() {
    let dir = tempfile::tempdir().unwrap();
    let handle = spawn(HoneypotConfig::for_test(dir.path().to_path_buf())).unwrap();
    let control = UdpSocket::bind("127.0.0.1:0").unwrap();
    control.send_to(b"SHUTDOWN\n", handle.control_addr).unwrap();
    wait_for_log(|| {
        handle.state.shutdown.load(std::sync::atomic::Ordering::SeqCst)
    });
    handle.stop();
}

use crate::classify::{Action, Classifier, ClassifyOutcome};
use crate::trigger::trigger_honeypot;
use crate::ProxyError;
use std::io::{BufRead, BufReader, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

#[derive(Debug, Clone)]
pub struct ProxyConfig {
    pub listen_addr: SocketAddr,
    /// Honeypot control port; None disables triggers.
    pub control_endpoint: Option<SocketAddr>,
}

/// A running check service bound to `addr`.
pub struct ProxyHandle {
    pub addr: SocketAddr,
    shutdown: Arc<AtomicBool>,
    thread: Option<std::thread::JoinHandle<()>>,
}

impl ProxyHandle {
    pub fn stop(mut self) {
        self.shutdown.store(true, Ordering::SeqCst);
        if let Some(thread) = self.thread.take() {
            let _ = thread.join();
        }
    }
}

struct Request {
    method: String,
    path: String,
    body: Vec<u8>,
}

fn read_request(stream: &mut TcpStream) -> std::io::Result<Request> {
    let mut reader = BufReader::new(stream);
    let mut request_line = String::new();
    reader.read_line(&mut request_line)?;
    let mut parts = request_line.split_whitespace();
    let method = parts.next().unwrap_or("").to_string();
    let path = parts.next().unwrap_or("").to_string();
    let mut content_length = 0usize;
    loop {
        let mut header = String::new();
        reader.read_line(&mut header)?;
        let header = header.trim_end();
        if header.is_empty() {
            break;
        }
        if let Some((name, value)) = header.split_once(':') {
            if name.eq_ignore_ascii_case("content-length") {
                content_length = value.trim().parse().unwrap_or(0);
            }
        }
    }
    let mut body = vec![0u8; content_length.min(1 << 20)];
    reader.read_exact(&mut body)?;
    Ok(Request { method, path, body })
}

fn respond(stream: &mut TcpStream, status: u16, reason: &str, body: &str) -> std::io::Result<()> {
    write!(
        stream,
        "HTTP/1.1 {status} {reason}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    )
}

fn handle_connection(
    mut stream: TcpStream,
    classifier: &Classifier,
    config: &ProxyConfig,
    started: Instant,
) {
    let request = match read_request(&mut stream) {
        Ok(r) => r,
        Err(_) => return,
    };
    let result = match (request.method.as_str(), request.path.as_str()) {
        ("GET", "/v1/health") => {
            let body = serde_json::json!({
                "status": "ok",
                "model_version": classifier.model_version,
                "uptime_seconds": started.elapsed().as_secs(),
            });
            respond(&mut stream, 200, "OK", &body.to_string())
        }
        ("POST", "/v1/check") => match parse_check_body(&request.body) {
            Ok(url) => {
                let outcome = classifier.classify_url(&url);
                if let ClassifyOutcome::Scored(verdict) = &outcome {
                    if verdict.action == Action::Trap {
                        if let Some(endpoint) = config.control_endpoint {
                            trigger_honeypot(verdict, endpoint);
                        }
                    }
                }
                let body = serde_json::to_string(&outcome).expect("outcome serializes");
                respond(&mut stream, 200, "OK", &body)
            }
            Err(message) => respond(
                &mut stream,
                400,
                "Bad Request",
                &serde_json::json!({ "error": message }).to_string(),
            ),
        },
        _ => respond(
            &mut stream,
            404,
            "Not Found",
            &serde_json::json!({ "error": "no such route" }).to_string(),
        ),
    };
    if let Err(err) = result {
        log::debug!("response write failed: {err}");
    }
}

fn parse_check_body(body: &[u8]) -> Result<String, String> {
    let value: serde_json::Value =
        serde_json::from_slice(body).map_err(|e| format!("invalid JSON body: {e}"))?;
    value
        .get("url")
        .and_then(serde_json::Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| "body must be an object with a string \"url\" field".to_string())
}

/// Starts the HTTP service on its own thread; requests are handled
/// sequentially per connection against the shared immutable model.
pub fn spawn(classifier: Arc<Classifier>, config: ProxyConfig) -> Result<ProxyHandle, ProxyError> {
    let listener = TcpListener::bind(config.listen_addr)
        .map_err(|e| ProxyError::Bind(config.listen_addr, e.to_string()))?;
    let addr = listener.local_addr()?;
    listener.set_nonblocking(true)?;
    let shutdown = Arc::new(AtomicBool::new(false));
    let shutdown_flag = Arc::clone(&shutdown);
    let started = Instant::now();
    let thread = std::thread::spawn(move || {
        let mut workers = Vec::new();
        while !shutdown_flag.load(Ordering::SeqCst) {
            match listener.accept() {
                Ok((stream, _)) => {
                    let _ = stream.set_nonblocking(false);
                    let _ = stream.set_read_timeout(Some(Duration::from_secs(10)));
                    let classifier = Arc::clone(&classifier);
                    let config = config.clone();
                    workers.push(std::thread::spawn(move || {
                        handle_connection(stream, &classifier, &config, started)
                    }));
                }
                Err(e) if e.kind() == std::io::ErrorKind::WouldBlock => {
                    std::thread::sleep(Duration::from_millis(5));
                }
                Err(_) => break,
            }
        }
        for worker in workers {
            let _ = worker.join();
        }
    });
    Ok(ProxyHandle { addr, shutdown, thread: Some(thread) })
}

/// Blocking wrapper around `spawn`; runs until the process exits.
pub fn serve_http(classifier: Arc<Classifier>, config: ProxyConfig) -> Result<(), ProxyError> {
    let handle = spawn(classifier, config)?;
    loop {
        if handle.shutdown.load(Ordering::SeqCst) {
            return Ok(());
        }
        std::thread::sleep(Duration::from_millis(200));
    }
}

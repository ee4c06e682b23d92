use crate::activity::ActivitySim;
use crate::control::control_listen;
use crate::fs::VirtualFs;
use crate::session::{EventKind, SessionEvent, SessionLogger};
use crate::shell::{handle_command, ShellState};
use crate::stall::KeySource;
use crate::HoneypotError;
use chrono::Utc;
use std::io::{BufRead, BufReader, Write};
use std::net::{SocketAddr, TcpListener, TcpStream, UdpSocket};
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Duration;

#[derive(Debug, Clone)]
pub struct HoneypotConfig {
    /// Shell service address; port 0 picks an ephemeral port.
    pub listen_addr: SocketAddr,
    /// One-way control datagram address.
    pub control_addr: SocketAddr,
    /// None → bundled fixture tree.
    pub fs_seed_path: Option<PathBuf>,
    pub log_dir: PathBuf,
    pub banner: String,
    pub key_seed: u64,
    pub activity_seed: u64,
    /// None disables background activity simulation.
    pub activity_interval: Option<Duration>,
}

impl HoneypotConfig {
    pub fn for_test(log_dir: PathBuf) -> HoneypotConfig {
        HoneypotConfig {
            listen_addr: "127.0.0.1:0".parse().expect("literal addr"),
            control_addr: "127.0.0.1:0".parse().expect("literal addr"),
            fs_seed_path: None,
            log_dir,
            banner: "Ubuntu 22.04.3 LTS files-01".to_string(),
            key_seed: 1,
            activity_seed: 7,
            activity_interval: None,
        }
    }
}

/// Shared service state: the virtual tree, the key source, and the run
/// flags the control channel flips.
pub struct ServiceState {
    pub fs: Mutex<VirtualFs>,
    pub keys: Mutex<KeySource>,
    pub logger: SessionLogger,
    pub activated: Mutex<Option<String>>,
    pub pending_activity_seed: Mutex<Option<u64>>,
    pub shutdown: AtomicBool,
    next_session: AtomicU64,
}

impl ServiceState {
    pub fn new(config: &HoneypotConfig) -> Result<ServiceState, HoneypotError> {
        let now = Utc::now();
        let fs = match &config.fs_seed_path {
            Some(path) => VirtualFs::from_seed(&std::fs::read_to_string(path)?, now)?,
            None => VirtualFs::bundled(now),
        };
        Ok(ServiceState {
            fs: Mutex::new(fs),
            keys: Mutex::new(KeySource::bundled(config.key_seed)),
            logger: SessionLogger::new(&config.log_dir)?,
            activated: Mutex::new(None),
            pending_activity_seed: Mutex::new(None),
            shutdown: AtomicBool::new(false),
            next_session: AtomicU64::new(1),
        })
    }

    pub fn log_event(&self, session_id: u64, kind: EventKind, payload: String) {
        self.log_sized(session_id, kind, payload, 0);
    }

    pub fn log_sized(&self, session_id: u64, kind: EventKind, payload: String, bytes: usize) {
        let event = SessionEvent {
            timestamp: Utc::now(),
            session_id,
            kind,
            payload,
            response_bytes: bytes,
        };
        if let Err(err) = self.logger.append(&event) {
            log::warn!("failed to append session log: {err}");
        }
    }
}

/// A running honeypot plus the addresses its sockets actually bound.
pub struct HoneypotHandle {
    pub state: Arc<ServiceState>,
    pub shell_addr: SocketAddr,
    pub control_addr: SocketAddr,
    threads: Vec<std::thread::JoinHandle<()>>,
}

impl HoneypotHandle {
    /// Requests shutdown and joins every service thread.
    pub fn stop(mut self) {
        self.state.shutdown.store(true, Ordering::SeqCst);
        for thread in self.threads.drain(..) {
            let _ = thread.join();
        }
    }
}

fn handle_session(stream: TcpStream, state: Arc<ServiceState>, banner: String) {
    let session_id = state.next_session.fetch_add(1, Ordering::SeqCst);
    let peer = stream
        .peer_addr()
        .map(|a| a.to_string())
        .unwrap_or_else(|_| "unknown".to_string());
    state.log_event(session_id, EventKind::Connect, peer);

    let result = (|| -> std::io::Result<()> {
        let mut writer = stream.try_clone()?;
        let reader = BufReader::new(stream);
        writer.write_all(format!("{banner}\n$ ").as_bytes())?;
        let mut shell = ShellState::default();
        for line in reader.lines() {
            let line = line?;
            state.log_event(session_id, EventKind::Command, line.clone());
            let outcome = {
                let fs = state.fs.lock().expect("fs lock");
                let mut keys = state.keys.lock().expect("keys lock");
                handle_command(&mut shell, &fs, &mut keys, &line)
            };
            state.log_sized(
                session_id,
                EventKind::Response,
                outcome.response.clone(),
                outcome.response.len(),
            );
            writer.write_all(outcome.response.as_bytes())?;
            if outcome.exit {
                break;
            }
            writer.write_all(b"$ ")?;
        }
        Ok(())
    })();
    if let Err(err) = result {
        log::debug!("session {session_id} ended with io error: {err}");
    }
    state.log_event(session_id, EventKind::Disconnect, String::new());
}

/// Starts every service thread and returns a handle; `serve` is the
/// blocking convenience wrapper.
pub fn spawn(config: HoneypotConfig) -> Result<HoneypotHandle, HoneypotError> {
    let state = Arc::new(ServiceState::new(&config)?);
    let listener = TcpListener::bind(config.listen_addr)
        .map_err(|e| HoneypotError::Bind(config.listen_addr, e.to_string()))?;
    let shell_addr = listener.local_addr()?;
    listener.set_nonblocking(true)?;
    let control_socket = UdpSocket::bind(config.control_addr)
        .map_err(|e| HoneypotError::Bind(config.control_addr, e.to_string()))?;
    let control_addr = control_socket.local_addr()?;
    control_socket.set_read_timeout(Some(Duration::from_millis(50)))?;

    let mut threads = Vec::new();

    let control_state = Arc::clone(&state);
    threads.push(std::thread::spawn(move || control_listen(control_socket, control_state)));

    if let Some(interval) = config.activity_interval {
        let sim_state = Arc::clone(&state);
        let seed = config.activity_seed;
        threads.push(std::thread::spawn(move || {
            let mut sim = ActivitySim::new(seed);
            while !sim_state.shutdown.load(Ordering::SeqCst) {
                std::thread::sleep(interval);
                if sim_state.shutdown.load(Ordering::SeqCst) {
                    break;
                }
                if let Some(new_seed) =
                    sim_state.pending_activity_seed.lock().expect("seed lock").take()
                {
                    sim.reseed(new_seed);
                }
                let description = {
                    let mut fs = sim_state.fs.lock().expect("fs lock");
                    sim.tick(&mut fs, Utc::now())
                };
                sim_state.log_event(0, EventKind::ActivitySim, description);
            }
        }));
    }

    let accept_state = Arc::clone(&state);
    let banner = config.banner.clone();
    threads.push(std::thread::spawn(move || {
        let mut sessions: Vec<std::thread::JoinHandle<()>> = Vec::new();
        loop {
            if accept_state.shutdown.load(Ordering::SeqCst) {
                break;
            }
            match listener.accept() {
                Ok((stream, _)) => {
                    let state = Arc::clone(&accept_state);
                    let banner = banner.clone();
                    sessions.push(std::thread::spawn(move || {
                        handle_session(stream, state, banner)
                    }));
                }
                Err(e) if e.kind() == std::io::ErrorKind::WouldBlock => {
                    std::thread::sleep(Duration::from_millis(10));
                }
                Err(_) => break,
            }
        }
        for session in sessions {
            let _ = session.join();
        }
    }));

    Ok(HoneypotHandle { state, shell_addr, control_addr, threads })
}

/// Runs the honeypot until a SHUTDOWN control command arrives.
pub fn serve(config: HoneypotConfig) -> Result<(), HoneypotError> {
    let handle = spawn(config)?;
    while !handle.state.shutdown.load(Ordering::SeqCst) {
        std::thread::sleep(Duration::from_millis(100));
    }
    handle.stop();
    Ok(())
}

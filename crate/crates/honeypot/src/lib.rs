//! Low-interaction honeypot: a fake-shell TCP service over a virtual
//! tree of dummy files. Protected files are served as ciphertext under
//! a keypair generated fresh for each read, so an attacker who keeps
//! pulling the same file keeps paying for new cryptanalysis. A one-way
//! datagram channel lets the operator push commands in; nothing ever
//! flows back out on it.

mod activity;
mod control;
mod export;
mod fs;
mod service;
mod session;
mod shell;
mod stall;

pub use activity::ActivitySim;
pub use control::{control_listen, ControlCommand, MAX_DATAGRAM};
pub use export::{export_sessions, ArchiveManifest, SessionArchive};
pub use fs::{normalize, VirtualFile, VirtualFs};
pub use service::{serve, spawn, HoneypotConfig, HoneypotHandle, ServiceState};
pub use session::{parse_log_line, EventKind, SessionEvent, SessionLogger};
pub use shell::{handle_command, ShellOutcome, ShellState, DEFAULT_CWD};
pub use stall::{read_file_stalled, KeySource};

use std::net::SocketAddr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HoneypotError {
    #[error("bad filesystem seed: {0}")]
    Seed(String),
    #[error("{0}: No such file or directory")]
    NotFound(String),
    #[error("{0} is not a protected file")]
    NotProtected(String),
    #[error("control channel: {0}")]
    Control(String),
    #[error("session log: {0}")]
    Log(String),
    #[error("cannot bind {0}: {1}")]
    Bind(SocketAddr, String),
    #[error("encryption failure: {0}")]
    Rsa(#[from] siren_prob_rsa::RsaError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

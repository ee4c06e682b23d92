//! The link-check service: scores URLs with the trained classifier and,
//! on a trap verdict, fires a one-way activation datagram at the
//! honeypot control port. A check API rather than a forwarding proxy;
//! callers ask about a URL and act on the verdict themselves.

mod batch;
mod classify;
mod http;
mod trigger;

pub use batch::{batch_check, BatchReport};
pub use classify::{Action, Classifier, ClassifyOutcome, Verdict, DEFAULT_THRESHOLD};
pub use http::{serve_http, spawn, ProxyConfig, ProxyHandle};
pub use trigger::trigger_honeypot;

use std::net::SocketAddr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProxyError {
    #[error("model: {0}")]
    Model(#[from] siren_neuralnet::NetError),
    #[error("cannot bind {0}: {1}")]
    Bind(SocketAddr, String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

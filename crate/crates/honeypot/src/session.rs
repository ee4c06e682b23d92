use crate::HoneypotError;
use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    Connect,
    Command,
    Response,
    Disconnect,
    ControlApplied,
    ActivitySim,
}

/// One log line. `response_bytes` counts what went back to the peer for
/// response events; zero otherwise.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionEvent {
    pub timestamp: DateTime<Utc>,
    pub session_id: u64,
    pub kind: EventKind,
    pub payload: String,
    pub response_bytes: usize,
}

/// Appends events as JSON lines, one file per session id under the log
/// directory. Control and activity events go to session id 0.
pub struct SessionLogger {
    dir: PathBuf,
    lock: Mutex<()>,
}

impl SessionLogger {
    pub fn new(dir: &Path) -> Result<SessionLogger, HoneypotError> {
        std::fs::create_dir_all(dir)?;
        Ok(SessionLogger { dir: dir.to_path_buf(), lock: Mutex::new(()) })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn append(&self, event: &SessionEvent) -> Result<(), HoneypotError> {
        let _guard = self.lock.lock().expect("log lock");
        let path = self.dir.join(format!("session-{:06}.log", event.session_id));
        let mut file = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
        let line = serde_json::to_string(event).map_err(|e| HoneypotError::Seed(e.to_string()))?;
        writeln!(file, "{line}")?;
        Ok(())
    }
}

pub fn parse_log_line(line: &str) -> Result<SessionEvent, HoneypotError> {
    serde_json::from_str(line).map_err(|e| HoneypotError::Log(e.to_string()))
}

use crate::session::{parse_log_line, EventKind, SessionEvent};
use crate::HoneypotError;
use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveManifest {
    pub session_count: usize,
    pub event_count: usize,
    pub first_event: Option<DateTime<Utc>>,
    pub last_event: Option<DateTime<Utc>>,
    pub command_histogram: BTreeMap<String, usize>,
}

#[derive(Debug, Clone)]
pub struct SessionArchive {
    pub manifest: ArchiveManifest,
    pub events: Vec<SessionEvent>,
}

impl SessionArchive {
    /// Manifest line first, then one event per line: the same format
    /// the per-session logs use, so the archive re-parses losslessly.
    pub fn render(&self) -> String {
        let mut out = serde_json::to_string(&self.manifest).expect("manifest serializes");
        out.push('\n');
        for event in &self.events {
            out.push_str(&serde_json::to_string(event).expect("event serializes"));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<SessionArchive, HoneypotError> {
        let mut lines = text.lines();
        let manifest_line =
            lines.next().ok_or_else(|| HoneypotError::Log("empty archive".into()))?;
        let manifest: ArchiveManifest = serde_json::from_str(manifest_line)
            .map_err(|e| HoneypotError::Log(e.to_string()))?;
        let events = lines.map(parse_log_line).collect::<Result<Vec<_>, _>>()?;
        Ok(SessionArchive { manifest, events })
    }
}

/// Merges every per-session log in `log_dir` into one archive.
pub fn export_sessions(log_dir: &Path) -> Result<SessionArchive, HoneypotError> {
    let mut events: Vec<SessionEvent> = Vec::new();
    let mut entries: Vec<_> = std::fs::read_dir(log_dir)?
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .filter(|e| e.file_name().to_string_lossy().ends_with(".log"))
        .collect();
    entries.sort_by_key(|e| e.file_name());
    for entry in entries {
        let text = std::fs::read_to_string(entry.path())?;
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            events.push(parse_log_line(line)?);
        }
    }
    events.sort_by_key(|e| (e.session_id, e.timestamp));

    let mut sessions: Vec<u64> = events.iter().map(|e| e.session_id).collect();
    sessions.sort_unstable();
    sessions.dedup();
    let mut command_histogram = BTreeMap::new();
    for event in events.iter().filter(|e| e.kind == EventKind::Command) {
        let verb = event.payload.split_whitespace().next().unwrap_or("").to_string();
        *command_histogram.entry(verb).or_insert(0) += 1;
    }
    let manifest = ArchiveManifest {
        session_count: sessions.len(),
        event_count: events.len(),
        first_event: events.iter().map(|e| e.timestamp).min(),
        last_event: events.iter().map(|e| e.timestamp).max(),
        command_histogram,
    };
    Ok(SessionArchive { manifest, events })
}

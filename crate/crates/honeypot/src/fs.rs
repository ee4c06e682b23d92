use crate::HoneypotError;
use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// One dummy file. Protected files are never served in the clear.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VirtualFile {
    pub content: Vec<u8>,
    pub protected: bool,
    pub modified: DateTime<Utc>,
}

/// In-memory tree of dummy files keyed by normalized absolute path.
/// All traversal goes through `normalize`, which clamps at the root, so
/// no session path can name anything outside the tree.
#[derive(Debug, Clone, Default)]
pub struct VirtualFs {
    files: BTreeMap<String, VirtualFile>,
}

#[derive(Debug, Deserialize)]
struct SeedEntry {
    path: String,
    content: String,
    #[serde(default)]
    protected: bool,
}

/// Resolves `input` against `cwd` into a canonical absolute path.
/// `..` segments above the root are discarded rather than rejected: the
/// fake shell mimics a real one, where `cd /..` lands in `/`.
pub fn normalize(cwd: &str, input: &str) -> String {
    let joined = if input.starts_with('/') {
        input.to_string()
    } else {
        format!("{}/{}", cwd.trim_end_matches('/'), input)
    };
    let mut stack: Vec<&str> = Vec::new();
    for segment in joined.split('/') {
        match segment {
            "" | "." => {}
            ".." => {
                stack.pop();
            }
            other => stack.push(other),
        }
    }
    if stack.is_empty() {
        "/".to_string()
    } else {
        format!("/{}", stack.join("/"))
    }
}

impl VirtualFs {
    pub fn new() -> VirtualFs {
        VirtualFs::default()
    }

    /// Loads the seed manifest: a JSON array of {path, content, protected}.
    pub fn from_seed(json: &str, now: DateTime<Utc>) -> Result<VirtualFs, HoneypotError> {
        let entries: Vec<SeedEntry> =
            serde_json::from_str(json).map_err(|e| HoneypotError::Seed(e.to_string()))?;
        let mut fs = VirtualFs::new();
        for entry in entries {
            let path = normalize("/", &entry.path);
            fs.insert(&path, entry.content.into_bytes(), entry.protected, now)?;
        }
        Ok(fs)
    }

    /// The fixture tree shipped with the crate.
    pub fn bundled(now: DateTime<Utc>) -> VirtualFs {
        VirtualFs::from_seed(include_str!("../data/fs-seed.json"), now)
            .expect("bundled seed is well formed")
    }

    pub fn insert(
        &mut self,
        path: &str,
        content: Vec<u8>,
        protected: bool,
        now: DateTime<Utc>,
    ) -> Result<(), HoneypotError> {
        let path = normalize("/", path);
        if path == "/" {
            return Err(HoneypotError::Seed("cannot create a file at /".into()));
        }
        self.files.insert(path, VirtualFile { content, protected, modified: now });
        Ok(())
    }

    pub fn get(&self, path: &str) -> Option<&VirtualFile> {
        self.files.get(&normalize("/", path))
    }

    pub fn get_mut(&mut self, path: &str) -> Option<&mut VirtualFile> {
        self.files.get_mut(&normalize("/", path))
    }

    /// True when the path is a directory: the root, or a prefix of some
    /// file path.
    pub fn is_dir(&self, path: &str) -> bool {
        let path = normalize("/", path);
        if path == "/" {
            return true;
        }
        let prefix = format!("{path}/");
        self.files.keys().any(|k| k.starts_with(&prefix))
    }

    /// Immediate children of a directory: (name, is_dir) pairs, sorted.
    pub fn list(&self, path: &str) -> Vec<(String, bool)> {
        let path = normalize("/", path);
        let prefix = if path == "/" { "/".to_string() } else { format!("{path}/") };
        let mut out: BTreeMap<String, bool> = BTreeMap::new();
        for key in self.files.keys() {
            if let Some(rest) = key.strip_prefix(&prefix) {
                match rest.split_once('/') {
                    Some((dir, _)) => {
                        out.insert(dir.to_string(), true);
                    }
                    None => {
                        out.insert(rest.to_string(), false);
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn paths(&self) -> impl Iterator<Item = &str> {
        self.files.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.files.len()
    }

    pub fn is_empty(&self) -> bool {
        self.files.is_empty()
    }

    /// ENCRYPT_ALL: every file becomes protected.
    pub fn protect_all(&mut self) {
        for file in self.files.values_mut() {
            file.protected = true;
        }
    }
}

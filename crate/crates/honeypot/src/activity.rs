use crate::fs::VirtualFs;
use chrono::{DateTime, Utc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

const FILE_STEMS: [&str; 8] =
    ["report", "draft", "meeting-notes", "invoice", "backlog", "inventory", "memo", "summary"];
const SENTENCES: [&str; 6] = [
    "Reviewed the quarterly figures with finance.",
    "Vendor call moved to Thursday.",
    "Backup completed without warnings.",
    "Reminder: badge renewal due next week.",
    "Updated the on-call rotation.",
    "Filed the compliance paperwork.",
];
const USERS: [&str; 4] = ["admin", "jmorgan", "bchen", "cokafor"];

/// Simulated user activity: creates and edits dummy files and appends
/// fake audit-log lines so the tree looks alive even between sessions.
/// Deterministic for a given seed and tick sequence.
pub struct ActivitySim {
    rng: ChaCha20Rng,
    ticks: u64,
}

impl ActivitySim {
    pub fn new(seed: u64) -> ActivitySim {
        ActivitySim { rng: ChaCha20Rng::seed_from_u64(seed), ticks: 0 }
    }

    pub fn reseed(&mut self, seed: u64) {
        self.rng = ChaCha20Rng::seed_from_u64(seed);
    }

    /// Applies one mutation to the tree and returns its description.
    pub fn tick(&mut self, fs: &mut VirtualFs, now: DateTime<Utc>) -> String {
        self.ticks += 1;
        match self.rng.random_range(0..3u8) {
            0 => {
                let stem = FILE_STEMS[self.rng.random_range(0..FILE_STEMS.len())];
                let path = format!("/home/admin/docs/{stem}-{:03}.txt", self.ticks);
                let body = SENTENCES[self.rng.random_range(0..SENTENCES.len())];
                fs.insert(&path, format!("{body}\n").into_bytes(), false, now)
                    .expect("path is inside the tree");
                format!("create {path}")
            }
            1 => {
                let paths: Vec<String> = fs
                    .paths()
                    .filter(|p| p.starts_with("/home/admin/"))
                    .map(str::to_string)
                    .collect();
                let path = &paths[self.rng.random_range(0..paths.len())];
                let line = SENTENCES[self.rng.random_range(0..SENTENCES.len())];
                let file = fs.get_mut(path).expect("path was just listed");
                if !file.protected {
                    file.content.extend_from_slice(line.as_bytes());
                    file.content.push(b'\n');
                }
                file.modified = now;
                format!("edit {path}")
            }
            _ => {
                let user = USERS[self.rng.random_range(0..USERS.len())];
                let line = format!(
                    "{} files sshd[{}]: Accepted password for {user} from 10.0.4.{}\n",
                    now.format("%b %e %H:%M:%S"),
                    self.rng.random_range(100..999),
                    self.rng.random_range(2..250)
                );
                let log = fs.get_mut("/var/log/auth.log").expect("seeded log file");
                log.content.extend_from_slice(line.as_bytes());
                log.modified = now;
                "append /var/log/auth.log".to_string()
            }
        }
    }
}

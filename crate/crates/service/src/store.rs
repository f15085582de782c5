//! On-disk layout of a deployment directory.
//!
//! ```text
//! <data_dir>/events.jsonl        the activity log, append-only
//! <data_dir>/idempotency.jsonl   responses to keyed POSTs, append-only
//! <data_dir>/external_scores.csv last uploaded external scores
//! <token_file>                   JSON map token -> participant id
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use rand::Rng;
use serde::{Deserialize, Serialize};
use skilltrace_core::domain::log::{parse_jsonl, to_jsonl, to_line};
use skilltrace_core::domain::{replay, ActivityEvent, ParticipantId, ReplayError, WorldState};

pub const LOG_FILE: &str = "events.jsonl";
pub const IDEMPOTENCY_FILE: &str = "idempotency.jsonl";
pub const EXTERNAL_SCORES_FILE: &str = "external_scores.csv";

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("{path}: {source}")]
    Replay { path: PathBuf, source: ReplayError },
    #[error("{0} already exists (use force to replace it)")]
    Exists(PathBuf),
    #[error("token file {path}: {reason}")]
    Tokens { path: PathBuf, reason: String },
}

/// Writes `bytes` to a sibling temp file, syncs it, then renames over `path`.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    if let Some(parent) = path.parent() {
        // best effort: persist the rename itself
        if let Ok(dir) = File::open(parent) {
            let _ = dir.sync_all();
        }
    }
    Ok(())
}

/// Append-only handle on `events.jsonl`.
#[derive(Debug)]
pub struct EventLog {
    file: File,
    len: u64,
}

/// State recovered when a deployment directory is opened.
#[derive(Debug)]
pub struct Recovered {
    pub log: EventLog,
    pub events: Vec<ActivityEvent>,
    pub world: WorldState,
    /// Bytes of an unterminated final line that were discarded. Such a line
    /// was never acknowledged, since appends are synced before replying.
    pub truncated_bytes: u64,
}

impl EventLog {
    pub fn open(dir: &Path) -> Result<Recovered, StoreError> {
        fs::create_dir_all(dir)?;
        let path = dir.join(LOG_FILE);
        let file = OpenOptions::new().read(true).append(true).create(true).open(&path)?;
        let bytes = fs::read(&path)?;
        let keep = match bytes.iter().rposition(|b| *b == b'\n') {
            Some(i) => i + 1,
            None => 0,
        };
        let truncated_bytes = (bytes.len() - keep) as u64;
        if truncated_bytes > 0 {
            file.set_len(keep as u64)?;
            file.sync_all()?;
        }
        let text = std::str::from_utf8(&bytes[..keep]).map_err(|e| StoreError::Replay {
            path: path.clone(),
            source: ReplayError::CorruptLog {
                line: bytes[..e.valid_up_to()].iter().filter(|b| **b == b'\n').count() + 1,
                reason: "invalid UTF-8".into(),
            },
        })?;
        let replayed = parse_jsonl(text).and_then(|events| replay(&events).map(|world| (events, world)));
        let (events, world) = replayed.map_err(|source| StoreError::Replay { path, source })?;
        Ok(Recovered { log: EventLog { file, len: keep as u64 }, events, world, truncated_bytes })
    }

    /// Appends events as one write and syncs before returning. A failed write
    /// is rolled back so the file never holds a partial batch.
    pub fn append(&mut self, events: &[ActivityEvent]) -> io::Result<()> {
        let mut buf = String::new();
        for e in events {
            buf.push_str(&to_line(e));
            buf.push('\n');
        }
        let result = self.file.write_all(buf.as_bytes()).and_then(|_| self.file.sync_data());
        match result {
            Ok(()) => {
                self.len += buf.len() as u64;
                Ok(())
            }
            Err(e) => {
                let _ = self.file.set_len(self.len);
                Err(e)
            }
        }
    }
}

/// Replaces the log of a deployment directory with `events` in canonical form.
pub fn install_log(dir: &Path, events: &[ActivityEvent], force: bool) -> Result<(), StoreError> {
    fs::create_dir_all(dir)?;
    let path = dir.join(LOG_FILE);
    let occupied = fs::metadata(&path).map(|m| m.len() > 0).unwrap_or(false);
    if occupied && !force {
        return Err(StoreError::Exists(path));
    }
    atomic_write(&path, to_jsonl(events).as_bytes())?;
    // responses cached against the old log no longer apply
    let idem = dir.join(IDEMPOTENCY_FILE);
    if idem.exists() {
        fs::remove_file(idem)?;
    }
    Ok(())
}

pub fn new_token() -> String {
    format!("{:032x}", rand::rng().random::<u128>())
}

pub fn read_tokens(path: &Path) -> Result<BTreeMap<String, ParticipantId>, StoreError> {
    match fs::read_to_string(path) {
        Ok(text) => serde_json::from_str(&text)
            .map_err(|e| StoreError::Tokens { path: path.into(), reason: e.to_string() }),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(BTreeMap::new()),
        Err(e) => Err(e.into()),
    }
}

pub fn write_tokens(path: &Path, tokens: &BTreeMap<String, ParticipantId>) -> io::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut text = serde_json::to_string_pretty(tokens).expect("string map serializes");
    text.push('\n');
    atomic_write(path, text.as_bytes())
}

/// Gives every registered participant without a token a fresh one. Returns
/// the number issued.
pub fn issue_missing_tokens(path: &Path, world: &WorldState) -> Result<usize, StoreError> {
    let mut tokens = read_tokens(path)?;
    let covered: std::collections::BTreeSet<ParticipantId> = tokens.values().cloned().collect();
    let mut issued = 0;
    for id in world.participants.keys() {
        if !covered.contains(id) {
            tokens.insert(new_token(), id.clone());
            issued += 1;
        }
    }
    if issued > 0 {
        write_tokens(path, &tokens)?;
    }
    Ok(issued)
}

/// A cached response to a keyed POST.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredResponse {
    pub scope: String,
    pub key: String,
    /// `METHOD path` of the original request.
    pub request: String,
    pub status: u16,
    pub content_type: String,
    pub body: String,
}

#[derive(Debug)]
pub struct IdempotencyLog {
    file: File,
    entries: HashMap<(String, String), StoredResponse>,
}

impl IdempotencyLog {
    pub fn open(dir: &Path) -> io::Result<Self> {
        let path = dir.join(IDEMPOTENCY_FILE);
        let file = OpenOptions::new().read(true).append(true).create(true).open(&path)?;
        let text = fs::read_to_string(&path)?;
        // an unparsable line is a torn append whose request was never answered
        let entries = text
            .lines()
            .filter_map(|line| serde_json::from_str::<StoredResponse>(line).ok())
            .map(|r| ((r.scope.clone(), r.key.clone()), r))
            .collect();
        Ok(Self { file, entries })
    }

    pub fn get(&self, scope: &str, key: &str) -> Option<&StoredResponse> {
        self.entries.get(&(scope.to_string(), key.to_string()))
    }

    pub fn record(&mut self, response: StoredResponse) -> io::Result<()> {
        let mut line = serde_json::to_string(&response).expect("stored responses serialize");
        line.push('\n');
        self.file.write_all(line.as_bytes())?;
        self.file.sync_data()?;
        self.entries.insert((response.scope.clone(), response.key.clone()), response);
        Ok(())
    }
}

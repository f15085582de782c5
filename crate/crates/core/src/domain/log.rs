//! JSON Lines persistence for the activity log.
//!
//! One event per line, UTF-8, every line terminated by `\n`. A file whose last
//! line lacks its terminator is treated as a torn write and rejected.

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use super::world::{replay, ReplayError, WorldState};
use super::ActivityEvent;

#[derive(Debug, thiserror::Error)]
pub enum LogError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Replay(#[from] ReplayError),
}

/// Canonical single-line form of an event (no trailing newline).
pub fn to_line(event: &ActivityEvent) -> String {
    serde_json::to_string(event).expect("events always serialize")
}

/// Parses a JSONL document. Structural problems surface as `CorruptLog`.
pub fn parse_jsonl(text: &str) -> Result<Vec<ActivityEvent>, ReplayError> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let line_count = text.split_terminator('\n').count();
    if !text.ends_with('\n') {
        return Err(ReplayError::CorruptLog {
            line: line_count,
            reason: "partial final line (missing newline)".into(),
        });
    }
    text.split_terminator('\n')
        .enumerate()
        .map(|(i, line)| {
            serde_json::from_str::<ActivityEvent>(line).map_err(|e| ReplayError::CorruptLog {
                line: i + 1,
                reason: e.to_string(),
            })
        })
        .collect()
}

pub fn read_jsonl<R: Read>(mut reader: R) -> Result<Vec<ActivityEvent>, LogError> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    let text = String::from_utf8(bytes).map_err(|e| {
        let line = e.as_bytes()[..e.utf8_error().valid_up_to()]
            .iter()
            .filter(|b| **b == b'\n')
            .count()
            + 1;
        ReplayError::CorruptLog { line, reason: "invalid UTF-8".into() }
    })?;
    Ok(parse_jsonl(&text)?)
}

pub fn load(path: &Path) -> Result<Vec<ActivityEvent>, LogError> {
    read_jsonl(fs::File::open(path)?)
}

/// Loads and replays a log file.
pub fn load_world(path: &Path) -> Result<(Vec<ActivityEvent>, WorldState), LogError> {
    let events = load(path)?;
    let world = replay(&events)?;
    Ok((events, world))
}

pub fn write_jsonl<W: Write>(events: &[ActivityEvent], mut writer: W) -> io::Result<()> {
    for event in events {
        writer.write_all(to_line(event).as_bytes())?;
        writer.write_all(b"\n")?;
    }
    writer.flush()
}

pub fn to_jsonl(events: &[ActivityEvent]) -> String {
    let mut out = String::new();
    for event in events {
        out.push_str(&to_line(event));
        out.push('\n');
    }
    out
}

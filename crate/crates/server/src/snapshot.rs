//! Append-only JSON-lines log per session, `<dir>/<id>.jsonl`.

use std::fs::{self, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::session::{RoundView, Session, SessionConfig};

#[derive(Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
enum Event {
    Created { id: String, config: SessionConfig },
    Settled { draws: u64, round: RoundView },
}

fn path_for(dir: &Path, id: &str) -> PathBuf {
    dir.join(format!("{id}.jsonl"))
}

fn append(dir: &Path, id: &str, event: &Event) -> io::Result<()> {
    let mut f = OpenOptions::new().create(true).append(true).open(path_for(dir, id))?;
    let mut line = serde_json::to_string(event)?;
    line.push('\n');
    f.write_all(line.as_bytes())
}

pub(crate) fn created(dir: &Path, s: &Session) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    append(dir, &s.id, &Event::Created { id: s.id.clone(), config: s.config.clone() })
}

pub(crate) fn settled(dir: &Path, s: &Session, round: &RoundView) -> io::Result<()> {
    append(dir, &s.id, &Event::Settled { draws: s.draws, round: round.clone() })
}

fn load_one(path: &Path) -> Result<Session, String> {
    let f = fs::File::open(path).map_err(|e| e.to_string())?;
    let mut session: Option<Session> = None;
    for (k, line) in BufReader::new(f).lines().enumerate() {
        let line = line.map_err(|e| e.to_string())?;
        if line.trim().is_empty() {
            continue;
        }
        let event: Event = serde_json::from_str(&line).map_err(|e| format!("line {}: {e}", k + 1))?;
        match (event, session.as_mut()) {
            (Event::Created { id, config }, None) => {
                session = Some(Session::new(id, config).map_err(|e| e.message)?);
            }
            (Event::Settled { draws, round }, Some(s)) => s.restore(draws, &round)?,
            _ => return Err(format!("line {}: out-of-order event", k + 1)),
        }
    }
    session.ok_or_else(|| "empty snapshot".into())
}

/// Rebuilds every session found in `dir`. Open rounds are not persisted and
/// come back closed. Unreadable files are reported and skipped.
pub fn load_all(dir: &Path) -> Vec<Session> {
    let Ok(entries) = fs::read_dir(dir) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for entry in entries.flatten() {
        let path = entry.path();
        if path.extension().is_some_and(|e| e == "jsonl") {
            match load_one(&path) {
                Ok(s) => out.push(s),
                Err(e) => eprintln!("skipping snapshot {}: {e}", path.display()),
            }
        }
    }
    out
}

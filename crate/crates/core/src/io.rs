//! JSON Lines event/result files and CSV tables.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::event::Event;
use crate::scalar::Real;

/// Reads one JSON value per non-blank line.
pub fn read_jsonl<D: DeserializeOwned>(path: impl AsRef<Path>) -> Result<Vec<D>> {
    parse_jsonl(BufReader::new(File::open(path)?))
}

pub fn parse_jsonl<D: DeserializeOwned>(reader: impl BufRead) -> Result<Vec<D>> {
    let mut out = Vec::new();
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let value = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: k + 1,
            message: e.to_string(),
        })?;
        out.push(value);
    }
    Ok(out)
}

pub fn write_jsonl<S: Serialize>(items: &[S], path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    emit_jsonl(items, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn emit_jsonl<S: Serialize>(items: &[S], mut w: impl Write) -> Result<()> {
    for item in items {
        serde_json::to_writer(&mut w, item)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_events<T: Real + DeserializeOwned>(path: impl AsRef<Path>) -> Result<Vec<Event<T>>> {
    read_jsonl(path)
}

pub fn write_events<T: Real + Serialize>(events: &[Event<T>], path: impl AsRef<Path>) -> Result<()> {
    write_jsonl(events, path)
}

/// Writes `rows` as CSV with a header taken from the row's field names.
pub fn write_csv<S: Serialize>(rows: &[S], path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

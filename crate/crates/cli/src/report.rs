//! Run reports, CSV writers, digests, and atomic file output.
//!
//! CSV bytes are deterministic for identical inputs and seed. The JSON run
//! report is deterministic except for the `wall_time_ms` field, which is
//! timing metadata outside the reproducibility contract.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

pub const TOOL_NAME: &str = "anosov";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub inputs: Vec<InputDigest>,
    pub wall_time_ms: u64,
    pub result: Value,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub digest: String,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            command: command.into(),
            parameters: BTreeMap::new(),
            inputs: Vec::new(),
            wall_time_ms: 0,
            result: Value::Null,
        }
    }

    pub fn parameter(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.into(), value.to_string());
        self
    }

    pub fn input(&mut self, path: &Path) -> Result<&mut Self, CliError> {
        let bytes = fs::read(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            digest: format!("fnv1a64:{:016x}", fnv1a64(&bytes)),
        });
        Ok(self)
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Format(format!("report serialization failed: {e}")))?;
        text.push('\n');
        write_atomic(path, text.as_bytes())
    }
}

/// FNV-1a 64-bit content digest; change detection, not cryptography.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Writes through a temporary file in the same directory plus a rename, so
/// readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
    let tmp = match dir {
        Some(d) => d.join(format!(
            ".{}.tmp{}",
            path.file_name().and_then(|n| n.to_str()).unwrap_or("out"),
            std::process::id()
        )),
        None => Path::new(&format!(".{}.tmp{}", path.display(), std::process::id())).to_path_buf(),
    };
    fs::write(&tmp, bytes)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", tmp.display())))?;
    fs::rename(&tmp, path)
        .map_err(|e| CliError::Io(format!("cannot rename into {}: {e}", path.display())))?;
    Ok(())
}

/// Serializes one CSV line; numeric formatting is shortest round-trip.
pub fn csv_line(fields: &[String]) -> String {
    let mut line = fields.join(",");
    line.push('\n');
    line
}

pub struct CsvWriter {
    buffer: String,
}

impl CsvWriter {
    pub fn new(header: &[&str]) -> Self {
        let mut buffer = String::new();
        buffer.push_str(&csv_line(
            &header.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        ));
        CsvWriter { buffer }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.buffer.push_str(&csv_line(fields));
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        write_atomic(path, self.buffer.as_bytes())
    }
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

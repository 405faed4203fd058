//! CSV and JSON emission. Data rows carry no timestamps; the JSON
//! `metadata` object holds the only one.

use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::CliError;

pub fn unix_seconds() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

pub fn csv_bytes<R, I>(header: &[&str], rows: R) -> Result<Vec<u8>, CliError>
where
    R: IntoIterator<Item = I>,
    I: IntoIterator,
    I::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::new(format!("csv: {e}"));
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.write_record(row).map_err(fail)?;
    }
    w.into_inner()
        .map_err(|e| CliError::new(format!("csv: {e}")))
}

/// `{"metadata": {...}, "records": ...}` with the generation time added to
/// the metadata.
pub fn json_bytes<T: Serialize + ?Sized>(
    mut metadata: Value,
    records: &T,
) -> Result<Vec<u8>, CliError> {
    if let Value::Object(m) = &mut metadata {
        m.insert("generated_unix".into(), json!(unix_seconds()));
    }
    let doc = json!({ "metadata": metadata, "records": records });
    let mut bytes =
        serde_json::to_vec_pretty(&doc).map_err(|e| CliError::new(format!("json: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes to `path` if given, otherwise to `stdout`.
pub fn emit(path: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes)
            .map_err(|e| CliError::new(format!("cannot write {}: {e}", p.display()))),
        None => stdout
            .write_all(bytes)
            .map_err(|e| CliError::new(format!("cannot write to stdout: {e}"))),
    }
}

/// Metadata common to every subcommand.
pub fn base_metadata(command: &str, cfg: &RunConfig) -> Value {
    json!({
        "command": command,
        "params": cfg.params,
        "tolerances": cfg.tolerances,
        "format_version": 1,
    })
}

/// Serializes records in the configured format.
pub fn render<T, F>(
    cfg: &RunConfig,
    metadata: Value,
    records: &[T],
    header: &[&str],
    row: F,
) -> Result<Vec<u8>, CliError>
where
    T: Serialize,
    F: Fn(&T) -> Vec<String>,
{
    match cfg.format {
        Format::Csv => csv_bytes(header, records.iter().map(row)),
        Format::Json => json_bytes(metadata, records),
    }
}

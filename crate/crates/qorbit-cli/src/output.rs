//! Deterministic file output: RFC-4180 CSV, JSON run manifests, and atomic
//! writes. Data files are bitwise-identical across reruns with the same
//! arguments; only the manifest's wall time varies.

use serde::Serialize;
use serde_json::Value;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

/// Formats a float with 16 fractional mantissa digits, the full round-trip
/// precision of an f64.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `bytes` through a sibling `.partial` file and a rename, so an
/// interrupted run never leaves a truncated file at the final name.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let Some(name) = path.file_name() else {
        return Err(io::Error::new(
            io::ErrorKind::InvalidInput,
            format!("not a file path: {}", path.display()),
        ));
    };
    let mut tmp_name = name.to_os_string();
    tmp_name.push(".partial");
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}

/// Renders an RFC-4180 CSV: CRLF record separators, one header record, no
/// quoting (every field here is numeric).
pub fn render_csv(header: &str, rows: &[Vec<String>]) -> Vec<u8> {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(header);
    out.push_str("\r\n");
    for row in rows {
        out.push_str(&row.join(","));
        out.push_str("\r\n");
    }
    out.into_bytes()
}

/// A file written by the run, as listed in the manifest.
#[derive(Serialize)]
pub struct OutputEntry {
    pub path: String,
    pub rows: usize,
}

/// Provenance record written next to every data file.
#[derive(Serialize)]
pub struct RunManifest {
    /// Subcommand that produced the outputs.
    pub command: String,
    /// Fully resolved parameters, defaults included.
    pub parameters: Value,
    /// Data files written by the run.
    pub outputs: Vec<OutputEntry>,
    /// Package versions that produced the data.
    pub versions: Value,
    /// Wall-clock duration of the run in seconds.
    pub wall_time: f64,
    /// Command-specific result summary (closure checks, identities, counts).
    #[serde(skip_serializing_if = "Value::is_null")]
    pub results: Value,
}

pub fn versions() -> Value {
    serde_json::json!({
        "qorbit-cli": env!("CARGO_PKG_VERSION"),
        "qorbit-core": qorbit_core::VERSION,
    })
}

/// `<out>.manifest.json` for a data file `<out>`.
pub fn manifest_path(out: &Path) -> PathBuf {
    sibling(out, ".manifest.json")
}

/// `<out><suffix>` next to a data file `<out>`.
pub fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(suffix);
    out.with_file_name(name)
}

pub fn write_manifest(out: &Path, manifest: &RunManifest) -> io::Result<()> {
    let mut bytes = serde_json::to_vec_pretty(manifest)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
    bytes.push(b'\n');
    atomic_write(&manifest_path(out), &bytes)
}

//! Report emission: JSON with stable key order, CSV with a provenance
//! header line, LF endings and '.' decimals.

use serde::Serialize;
use std::io::Write;
use std::path::Path;

/// Writes a serializable report as pretty JSON (stable key order follows the
/// struct field order).
pub fn write_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<(), String> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    text.push('\n');
    emit(out, &text)
}

/// Writes CSV: `# config_hash=…` provenance line, a header row, data rows.
pub fn write_csv(
    out: Option<&Path>,
    config_hash: &str,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<(), String> {
    let mut text = String::new();
    text.push_str(&format!("# config_hash={config_hash}\n"));
    text.push_str(&header.join(","));
    text.push('\n');
    for row in rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    emit(out, &text)
}

/// CSV with named sections (used by the matrix dump).
pub fn write_csv_sections(
    out: Option<&Path>,
    config_hash: &str,
    sections: &[(&str, Vec<&str>, Vec<Vec<String>>)],
) -> Result<(), String> {
    let mut text = String::new();
    text.push_str(&format!("# config_hash={config_hash}\n"));
    for (name, header, rows) in sections {
        text.push_str(&format!("# matrix={name}\n"));
        text.push_str(&header.join(","));
        text.push('\n');
        for row in rows {
            text.push_str(&row.join(","));
            text.push('\n');
        }
    }
    emit(out, &text)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes()).map_err(|e| e.to_string())
        }
    }
}

/// Canonical float formatting shared by the CSV writers.
pub fn fmt(v: f64) -> String {
    if v.is_infinite() {
        if v < 0.0 {
            "-inf".into()
        } else {
            "inf".into()
        }
    } else {
        format!("{v}")
    }
}

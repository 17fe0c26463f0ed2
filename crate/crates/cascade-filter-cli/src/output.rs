//! CSV and manifest writing. Files are written to a temporary sibling and
//! renamed into place so readers never see a partial file.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

/// One CSV table: a header naming columns with units, then numeric rows.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|v| fmt_num(*v)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

/// 17 significant digits, locale independent.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_atomic(path: &Path, body: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(body)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Sidecar path for an output file: `<out>.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

#[derive(Debug, Serialize)]
pub struct Tolerances {
    pub dark_threshold: f64,
    pub g2_imaginary: f64,
    pub regression_rk4_agreement: f64,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub outputs: Vec<String>,
    pub wall_time_s: f64,
    pub engine_version: String,
    pub tolerances: Tolerances,
}

//! Output files: CSV with a `#`-prefixed manifest header, and JSON documents
//! carrying the manifest as a `manifest` field.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

#[derive(Debug, Clone)]
pub struct Manifest {
    pub command: &'static str,
    pub input: PathBuf,
    pub output: PathBuf,
    pub seed: u64,
    /// Effective tolerances and numeric options, in a fixed order.
    pub settings: Vec<(&'static str, String)>,
    pub timestamp: String,
}

impl Manifest {
    pub fn new(command: &'static str, input: &Path, output: &Path, seed: u64) -> Self {
        Self {
            command,
            input: input.to_path_buf(),
            output: output.to_path_buf(),
            seed,
            settings: Vec::new(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    pub fn set(&mut self, key: &'static str, value: impl ToString) {
        self.settings.push((key, value.to_string()));
    }

    fn csv_header(&self) -> String {
        let mut s = String::new();
        writeln!(s, "# command: {}", self.command).unwrap();
        writeln!(s, "# input: {}", self.input.display()).unwrap();
        writeln!(s, "# output: {}", self.output.display()).unwrap();
        writeln!(s, "# seed: {}", self.seed).unwrap();
        for (k, v) in &self.settings {
            writeln!(s, "# {k}: {v}").unwrap();
        }
        writeln!(s, "# timestamp: {}", self.timestamp).unwrap();
        s
    }

    pub fn to_json(&self) -> Value {
        let settings: serde_json::Map<String, Value> =
            self.settings.iter().map(|(k, v)| (k.to_string(), Value::String(v.clone()))).collect();
        json!({
            "command": self.command,
            "input": self.input.display().to_string(),
            "output": self.output.display().to_string(),
            "seed": self.seed,
            "settings": settings,
            "timestamp": self.timestamp,
        })
    }
}

/// Full double precision: 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct Csv {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, manifest: &Manifest, path: &Path) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(manifest.csv_header().into_bytes());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        fs::write(path, bytes)
    }
}

pub fn write_json(manifest: &Manifest, mut body: Value, path: &Path) -> std::io::Result<()> {
    body.as_object_mut().expect("JSON outputs are objects").insert("manifest".into(), manifest.to_json());
    let mut text = serde_json::to_string_pretty(&body)?;
    text.push('\n');
    fs::write(path, text)
}

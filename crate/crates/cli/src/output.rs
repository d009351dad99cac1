use std::fmt;
use std::path::Path;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Budget(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Budget(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Budget(m) => f.write_str(m),
        }
    }
}

impl From<cubic_circle::Error> for CliError {
    fn from(e: cubic_circle::Error) -> Self {
        if e.is_budget() {
            CliError::Budget(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// Everything a command produces.
pub struct Emit {
    pub json: Value,
    pub csv: Option<Table>,
    pub text: String,
    /// False makes the process exit with 1 after printing.
    pub ok: bool,
    /// Input files and their SHA-256 digests.
    pub inputs: Vec<(String, String)>,
    /// Resolved run configuration.
    pub config: Value,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn json_text(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

pub fn csv_text(t: &Table) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Input(format!("csv: {e}"));
    w.write_record(&t.header).map_err(io)?;
    for r in &t.rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Input(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_outputs(dir: &Path, e: &Emit) -> CliResult<()> {
    let io = |err: std::io::Error| CliError::Input(format!("cannot write to {}: {err}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut files = vec!["result.json".to_string()];
    std::fs::write(dir.join("result.json"), json_text(&e.json) + "\n").map_err(io)?;
    if let Some(t) = &e.csv {
        std::fs::write(dir.join("result.csv"), csv_text(t)?).map_err(io)?;
        files.push("result.csv".into());
    }
    let outputs: Vec<Value> = files
        .iter()
        .map(|f| {
            let bytes = std::fs::read(dir.join(f)).unwrap_or_default();
            json!({ "file": f, "sha256": sha256_hex(&bytes) })
        })
        .collect();
    let inputs: Vec<Value> = e.inputs.iter().map(|(p, h)| json!({ "path": p, "sha256": h })).collect();
    let manifest = json!({
        "tool": "cubic-circle",
        "version": env!("CARGO_PKG_VERSION"),
        "config": e.config,
        "inputs": inputs,
        "outputs": outputs,
    });
    std::fs::write(dir.join("manifest.json"), json_text(&manifest) + "\n").map_err(io)?;
    Ok(())
}

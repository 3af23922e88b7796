use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {1}", .0.display())]
    Io(PathBuf, std::io::Error),
    #[error(transparent)]
    Core(#[from] anondyn::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(..) => "io",
            CliError::Core(_) => "invalid-input",
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Common report header: tool version, hashed inputs and the seed, if any.
pub fn envelope(command: &str, inputs: &[(&Path, String)], seed: Option<u64>) -> Value {
    let inputs: serde_json::Map<String, Value> =
        inputs.iter().map(|(p, h)| (p.display().to_string(), json!(h))).collect();
    json!({
        "tool": "anondyn",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "inputs_sha256": inputs,
        "seed": seed,
    })
}

/// Writes through a sibling temporary file so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e| CliError::Io(path.to_path_buf(), e);
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

//! Resume files. A checkpoint is only accepted by the run that wrote it, which is
//! recognized by a hash over the command and all result-affecting parameters.

use std::path::Path;

use polyfact::solver::brocard::BrocardScan;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::output::SCHEMA;
use crate::Failure;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub schema: String,
    pub command: String,
    pub hash: String,
    /// First tuple not yet processed, in canonical order.
    pub next_tuple: u128,
    pub tuples_done: u128,
    pub found: u64,
    pub pruned: u64,
    /// Length of the output file up to the last completed chunk.
    pub output_bytes: u64,
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<BrocardScan>,
}

impl Checkpoint {
    pub fn new(command: &str, hash: String) -> Self {
        Checkpoint {
            schema: SCHEMA.into(),
            command: command.into(),
            hash,
            next_tuple: 0,
            tuples_done: 0,
            found: 0,
            pruned: 0,
            output_bytes: 0,
            warnings: Vec::new(),
            scan: None,
        }
    }

    /// Loads a checkpoint and refuses it unless it was written by the same run.
    pub fn load(path: &Path, command: &str, hash: &str) -> Result<Option<Checkpoint>, Failure> {
        if !path.exists() {
            return Ok(None);
        }
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read checkpoint {}: {e}", path.display())))?;
        let cp: Checkpoint = serde_json::from_str(&text)
            .map_err(|e| Failure::usage(format!("corrupt checkpoint {}: {e}", path.display())))?;
        if cp.command != command || cp.hash != hash {
            return Err(Failure::usage(format!(
                "checkpoint {} was written by a different run (hash mismatch); refusing to resume",
                path.display()
            )));
        }
        Ok(Some(cp))
    }

    /// Writes to a temporary file and renames it over the target.
    pub fn save(&self, path: &Path) -> Result<(), Failure> {
        let tmp = path.with_extension("tmp");
        let text = serde_json::to_string_pretty(self).expect("serializable");
        std::fs::write(&tmp, text)
            .and_then(|_| std::fs::rename(&tmp, path))
            .map_err(|e| Failure::usage(format!("cannot write checkpoint {}: {e}", path.display())))
    }
}

/// Hex SHA-256 of the parts joined by newlines.
pub fn run_hash(parts: &[String]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update(b"\n");
    }
    format!("{:x}", h.finalize())
}

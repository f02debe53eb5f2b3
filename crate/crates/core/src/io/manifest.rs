//! JSON-lines run manifest.
//!
//! The first record echoes the resolved configuration and its hash; each
//! output file adds a record with its own digest; the last record holds the
//! exit status. Timestamps appear only here, never in the data files.

use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::json;
use sha2::{Digest, Sha256};

use super::config::RunConfig;
use crate::error::{Error, Result};

pub const MANIFEST_NAME: &str = "manifest.jsonl";

pub struct Manifest {
    dir: PathBuf,
    file: File,
    config_hash: String,
}

fn unix_seconds() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

impl Manifest {
    /// Creates `dir` if needed and appends the run record.
    pub fn create(dir: &Path, command: &str, config: &RunConfig) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        let file = OpenOptions::new().create(true).append(true).open(dir.join(MANIFEST_NAME))?;
        let config_hash = config.hash()?;
        let mut m = Self { dir: dir.to_path_buf(), file, config_hash };
        let record = json!({
            "record": "run",
            "command": command,
            "config_hash": m.config_hash,
            "version": env!("CARGO_PKG_VERSION"),
            "threads": rayon::current_num_threads(),
            "unix_time": unix_seconds(),
            "config": serde_json::to_value(config).map_err(|e| Error::Format(e.to_string()))?,
            // exact echo: JSON has no infinity for `q = inf`
            "config_toml": config.to_toml()?,
        });
        m.write(record)?;
        Ok(m)
    }

    pub fn config_hash(&self) -> &str {
        &self.config_hash
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn write(&mut self, record: serde_json::Value) -> Result<()> {
        writeln!(self.file, "{record}")?;
        self.file.flush()?;
        Ok(())
    }

    /// Records a file written under the output directory.
    pub fn record_output(&mut self, relative: &str) -> Result<()> {
        let bytes = std::fs::read(self.dir.join(relative))?;
        let record = json!({
            "record": "output",
            "path": relative,
            "config_hash": self.config_hash,
            "sha256": hex::encode(Sha256::digest(&bytes)),
            "bytes": bytes.len(),
        });
        self.write(record)
    }

    pub fn finish(&mut self, outcome: &Result<()>) -> Result<()> {
        let record = match outcome {
            Ok(()) => json!({ "record": "status", "config_hash": self.config_hash, "exit_code": 0 }),
            Err(e) => json!({
                "record": "status",
                "config_hash": self.config_hash,
                "exit_code": e.exit_code(),
                "category": e.category(),
                "message": e.to_string(),
            }),
        };
        self.write(record)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_in_order() {
        let dir = tempfile::tempdir().unwrap();
        let config = RunConfig::default();
        let mut m = Manifest::create(dir.path(), "simulate", &config).unwrap();
        std::fs::write(dir.path().join("a.csv"), "t\n0\n").unwrap();
        m.record_output("a.csv").unwrap();
        m.finish(&Err(Error::Usage("x".into()))).unwrap();
        let text = std::fs::read_to_string(dir.path().join(MANIFEST_NAME)).unwrap();
        let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0]["record"], "run");
        assert_eq!(lines[0]["config"]["physics"]["gamma"], 1.0);
        assert_eq!(lines[1]["config_hash"], config.hash().unwrap());
        assert_eq!(lines[1]["bytes"], 4);
        assert_eq!(lines[2]["exit_code"], 2);
        assert_eq!(lines[2]["category"], "usage");
    }
}

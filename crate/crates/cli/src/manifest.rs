//! Run manifests and the single writer that commits a command's artifacts.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const MANIFEST_SCHEMA: &str = "progc.manifest/1";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtifactRecord {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Everything needed to reproduce a command's outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema: String,
    pub tool_version: String,
    /// Arguments after the program name, `--out` included.
    pub command: Vec<String>,
    pub params: serde_json::Value,
    pub artifacts: Vec<ArtifactRecord>,
    pub timestamp: String,
}

impl RunManifest {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read manifest {}: {e}", path.display())))?;
        let manifest: RunManifest = serde_json::from_str(&text)
            .map_err(|e| CliError::usage(format!("malformed manifest {}: {e}", path.display())))?;
        if manifest.schema != MANIFEST_SCHEMA {
            return Err(CliError::usage(format!(
                "unsupported manifest schema `{}` (expected {MANIFEST_SCHEMA})",
                manifest.schema
            )));
        }
        Ok(manifest)
    }

    /// The recorded command with its output directory replaced.
    pub fn command_with_out(&self, out: &Path) -> Vec<String> {
        let out = out.display().to_string();
        let mut args = Vec::with_capacity(self.command.len() + 2);
        let mut iter = self.command.iter();
        let mut replaced = false;
        while let Some(arg) = iter.next() {
            if arg == "--out" {
                iter.next();
                args.extend(["--out".to_string(), out.clone()]);
                replaced = true;
            } else if arg.starts_with("--out=") {
                args.push(format!("--out={out}"));
                replaced = true;
            } else {
                args.push(arg.clone());
            }
        }
        if !replaced {
            args.extend(["--out".to_string(), out]);
        }
        args
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Collects artifacts in memory; nothing touches the disk until [`Artifacts::commit`].
#[derive(Debug, Default)]
pub struct Artifacts {
    files: Vec<(String, Vec<u8>)>,
}

impl Artifacts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: impl Into<String>, bytes: Vec<u8>) {
        self.files.push((name.into(), bytes));
    }

    pub fn records(&self) -> Vec<ArtifactRecord> {
        self.files
            .iter()
            .map(|(path, bytes)| ArtifactRecord {
                path: path.clone(),
                sha256: sha256_hex(bytes),
                bytes: bytes.len(),
            })
            .collect()
    }

    /// Writes every artifact and then the manifest into `dir`. Files are
    /// staged under temporary names and renamed only once all are written.
    pub fn commit(self, dir: &Path, command: &[String], params: serde_json::Value) -> CliResult<RunManifest> {
        let manifest = RunManifest {
            schema: MANIFEST_SCHEMA.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_vec(),
            params,
            artifacts: self.records(),
            timestamp: chrono::Utc::now().to_rfc3339(),
        };
        let mut files = self.files;
        files.push((MANIFEST_FILE.to_string(), serde_json::to_vec_pretty(&manifest)?));

        fs::create_dir_all(dir)?;
        let mut staged: Vec<(PathBuf, PathBuf)> = Vec::with_capacity(files.len());
        let result = (|| -> std::io::Result<()> {
            for (name, bytes) in &files {
                let target = dir.join(name);
                let tmp = dir.join(format!(".{name}.partial"));
                fs::write(&tmp, bytes)?;
                staged.push((tmp, target));
            }
            for (tmp, target) in &staged {
                fs::rename(tmp, target)?;
            }
            Ok(())
        })();
        if let Err(err) = result {
            for (tmp, _) in &staged {
                let _ = fs::remove_file(tmp);
            }
            return Err(err.into());
        }
        Ok(manifest)
    }
}

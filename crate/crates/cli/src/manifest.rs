use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct OutputDigest {
    pub path: String,
    pub sha256: String,
}

/// Record of one artifact-producing run. Re-running `qesc` with `parameters`
/// reproduces every listed output byte for byte.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Vec<String>,
    pub tool_version: String,
    pub seeds: Vec<u64>,
    pub outputs: Vec<OutputDigest>,
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

/// Write `contents` to `out` and its manifest next to it.
pub fn write_artifact(out: &Path, contents: &[u8], command: &str, seeds: Vec<u64>) -> Result<PathBuf> {
    fs::write(out, contents).with_context(|| format!("writing {}", out.display()))?;
    let manifest = RunManifest {
        command: command.to_string(),
        parameters: std::env::args().skip(1).collect(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seeds,
        outputs: vec![OutputDigest {
            path: out.display().to_string(),
            sha256: sha256_file(out)?,
        }],
    };
    let path = manifest_path(out);
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

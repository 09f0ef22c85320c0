//! Downloads benchmark files listed in the registry, verifying SHA-256 when
//! the manifest records one.

use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{BenchError, Result};
use crate::registry::{DatasetEntry, Registry};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FetchOutcome {
    Downloaded { sha256: String },
    AlreadyPresent,
    Failed(String),
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Checks `bytes` against the manifest digest, if any.
pub fn verify(entry: &DatasetEntry, bytes: &[u8]) -> Result<String> {
    let got = sha256_hex(bytes);
    match &entry.sha256 {
        Some(want) if !want.eq_ignore_ascii_case(&got) => Err(BenchError::Dataset(format!(
            "{}: checksum mismatch (expected {want}, got {got})",
            entry.name
        ))),
        _ => Ok(got),
    }
}

fn download(url: &str) -> std::result::Result<Vec<u8>, String> {
    let mut resp = ureq::get(url).call().map_err(|e| e.to_string())?;
    resp.body_mut().read_to_vec().map_err(|e| e.to_string())
}

/// Fetches every file-backed entry (or only `names`) into `data_dir`.
pub fn fetch_all(reg: &Registry, data_dir: &Path, names: &[String], force: bool) -> Result<Vec<(String, FetchOutcome)>> {
    fs::create_dir_all(data_dir).map_err(|e| BenchError::io(data_dir, e))?;
    let mut out = Vec::new();
    for entry in &reg.datasets {
        if !names.is_empty() && !names.iter().any(|n| n.eq_ignore_ascii_case(&entry.name)) {
            continue;
        }
        let (Some(file), Some(url)) = (entry.file.as_deref(), reg.url(entry)) else {
            continue;
        };
        let target = data_dir.join(file);
        if target.exists() && !force {
            out.push((entry.name.clone(), FetchOutcome::AlreadyPresent));
            continue;
        }
        let outcome = match download(&url) {
            Ok(bytes) => {
                let sha256 = verify(entry, &bytes)?;
                fs::write(&target, &bytes).map_err(|e| BenchError::io(&target, e))?;
                FetchOutcome::Downloaded { sha256 }
            }
            Err(e) => FetchOutcome::Failed(format!("{url}: {e}")),
        };
        out.push((entry.name.clone(), outcome));
    }
    Ok(out)
}

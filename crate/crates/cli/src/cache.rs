//! On-disk layout: `<cache>/<hash>/{checkpoint.json, invariant.json, manifest.json}`.

use std::env;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

/// `--cache-dir`, else `$LIEINV_CACHE_DIR` (handled by clap), else the XDG
/// cache directory.
pub fn cache_root(explicit: Option<&Path>) -> PathBuf {
    if let Some(p) = explicit {
        return p.to_path_buf();
    }
    if let Some(x) = env::var_os("XDG_CACHE_HOME").filter(|x| !x.is_empty()) {
        return PathBuf::from(x).join("lieinv");
    }
    match env::var_os("HOME") {
        Some(h) => PathBuf::from(h).join(".cache").join("lieinv"),
        None => env::temp_dir().join("lieinv-cache"),
    }
}

pub struct Entry {
    pub dir: PathBuf,
}

impl Entry {
    pub fn new(root: &Path, hash: &str) -> Self {
        Entry {
            dir: root.join(hash),
        }
    }

    pub fn checkpoint(&self) -> PathBuf {
        self.dir.join("checkpoint.json")
    }

    pub fn invariant(&self) -> PathBuf {
        self.dir.join("invariant.json")
    }

    pub fn manifest(&self) -> PathBuf {
        self.dir.join("manifest.json")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub hash: String,
    pub algebra: String,
    pub degree: u32,
    pub scope: String,
    pub index: Option<usize>,
    /// Slice target in `xi1..xil`.
    pub seed: String,
    pub counts: lieinv_core::termgen::TermCounts,
    pub strata: usize,
    pub completed_strata: usize,
    pub terms_in_result: usize,
    pub millis: Timings,
    pub from_cache: bool,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Timings {
    pub frame: u128,
    pub terms: u128,
    pub values: u128,
    pub assemble: u128,
}

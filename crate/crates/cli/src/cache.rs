//! On-disk result cache keyed by spec string, metric and tool version.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Environment variable naming the cache directory. Caching is off when it
/// is unset.
pub const CACHE_ENV: &str = "GROUPAPPROX_CACHE_DIR";

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
    version: String,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>, version: impl Into<String>) -> Self {
        Cache {
            dir: dir.into(),
            version: version.into(),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn key(&self, spec: &str, metric: &str) -> String {
        let mut h = Sha256::new();
        for part in [spec, metric, &self.version] {
            h.update(part.as_bytes());
            h.update([0]);
        }
        format!("{:x}", h.finalize())
    }

    fn path(&self, spec: &str, metric: &str) -> PathBuf {
        self.dir.join(format!("{}.json", self.key(spec, metric)))
    }

    /// The cached document, if present, readable and written by this
    /// version for this spec and metric.
    pub fn get(&self, spec: &str, metric: &str) -> Option<Value> {
        let path = self.path(spec, metric);
        let text = fs::read_to_string(&path).ok()?;
        let entry: Value = match serde_json::from_str(&text) {
            Ok(v) => v,
            Err(e) => {
                log::warn!("ignoring corrupt cache file {}: {e}", path.display());
                return None;
            }
        };
        let matches = entry["spec"] == spec && entry["metric"] == metric && entry["version"] == self.version.as_str();
        if !matches || !entry["document"].is_object() {
            log::warn!("ignoring mismatched cache file {}", path.display());
            return None;
        }
        Some(entry["document"].clone())
    }

    /// Stores `document` by writing a temporary file in the cache directory
    /// and renaming it into place.
    pub fn put(&self, spec: &str, metric: &str, document: &Value) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let entry = json!({
            "spec": spec,
            "metric": metric,
            "version": self.version,
            "document": document,
        });
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(serde_json::to_string(&entry)?.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(spec, metric)).map_err(|e| e.error)?;
        Ok(())
    }
}

//! Content-addressed on-disk store for reduced spans.
//!
//! Each entry is one JSON file named by the SHA-256 of its lookup key. The
//! file records the payload hash; a mismatch on load is reported as a cache
//! integrity error instead of being silently recomputed.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::SliceBasis;

pub const CACHE_VERSION: u32 = 1;

/// Environment variable that overrides the default cache directory.
pub const CACHE_DIR_ENV: &str = "LCS_CACHE_DIR";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Serialize, Deserialize)]
struct Entry {
    version: u32,
    key: String,
    tag: String,
    slice: Vec<i16>,
    payload_sha256: String,
    payload: SliceBasis,
}

/// Summary line for `cache status`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryInfo {
    pub tag: String,
    pub slice: Vec<i16>,
    pub rank: usize,
    pub hash: String,
}

#[derive(Clone, Debug)]
pub struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(DiskCache { dir })
    }

    /// `$LCS_CACHE_DIR` if set, otherwise `fallback`.
    pub fn dir_from_env(fallback: &Path) -> PathBuf {
        std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| fallback.to_path_buf())
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.json", sha256_hex(key.as_bytes())))
    }

    pub fn load(&self, key: &str) -> Result<Option<SliceBasis>> {
        let path = self.path(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let entry: Entry =
            serde_json::from_str(&text).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
        if entry.version != CACHE_VERSION || entry.key != key {
            return Ok(None);
        }
        let payload = serde_json::to_string(&entry.payload)?;
        if sha256_hex(payload.as_bytes()) != entry.payload_sha256 {
            return Err(Error::Cache(format!("payload hash mismatch in {}", path.display())));
        }
        Ok(Some(entry.payload))
    }

    pub fn store(&self, key: &str, tag: &str, slice: &[i16], basis: &SliceBasis) -> Result<()> {
        let payload = serde_json::to_string(basis)?;
        let entry = Entry {
            version: CACHE_VERSION,
            key: key.to_string(),
            tag: tag.to_string(),
            slice: slice.to_vec(),
            payload_sha256: sha256_hex(payload.as_bytes()),
            payload: basis.clone(),
        };
        let path = self.path(key);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(&entry)?)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    /// All readable entries, sorted by tag then slice.
    pub fn entries(&self) -> Result<Vec<EntryInfo>> {
        let mut out = Vec::new();
        for f in fs::read_dir(&self.dir)? {
            let path = f?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            let text = fs::read_to_string(&path)?;
            let Ok(entry) = serde_json::from_str::<Entry>(&text) else { continue };
            out.push(EntryInfo {
                tag: entry.tag,
                slice: entry.slice,
                rank: entry.payload.rank(),
                hash: entry.payload_sha256,
            });
        }
        out.sort_by(|a, b| (&a.tag, &a.slice).cmp(&(&b.tag, &b.slice)));
        Ok(out)
    }

    /// Removes every entry; returns how many files were deleted.
    pub fn clear(&self) -> Result<usize> {
        let mut n = 0;
        for f in fs::read_dir(&self.dir)? {
            let path = f?.path();
            if path.extension().and_then(|e| e.to_str()) == Some("json") {
                fs::remove_file(path)?;
                n += 1;
            }
        }
        Ok(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{reduce, SparseVec};
    use crate::scalar::Rational;

    #[test]
    fn round_trip_and_tamper_detection() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache::open(dir.path()).unwrap();
        let b = reduce(
            &[SparseVec::new([(0, Rational::new(1, 3)), (2, Rational::from_int(5))]), SparseVec::unit(1)],
            3,
        )
        .unwrap();
        assert!(cache.load("k").unwrap().is_none());
        cache.store("k", "L2", &[2, 0], &b).unwrap();
        assert_eq!(cache.load("k").unwrap().unwrap(), b);
        assert_eq!(cache.entries().unwrap().len(), 1);

        let path = cache.path("k");
        let text = fs::read_to_string(&path).unwrap().replace("\"15", "\"16");
        fs::write(&path, text).unwrap();
        assert!(matches!(cache.load("k"), Err(Error::Cache(_))));
        assert_eq!(cache.clear().unwrap(), 1);
        assert!(cache.entries().unwrap().is_empty());
    }
}

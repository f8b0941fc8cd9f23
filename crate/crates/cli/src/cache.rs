//! On-disk result cache.
//!
//! Layout: `index.json` maps a key to `{file, digest}` and each envelope lives
//! in its own file. Readers and writers take a lock on `lock` for the
//! duration of an index access.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::job::JobSpec;
use crate::payload::ResultEnvelope;

pub const CACHE_ENV: &str = "PARCOHOM_CACHE";

pub fn version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Hash of the canonical JSON of the job and the library version.
pub fn cache_key(job: &JobSpec) -> String {
    #[derive(Serialize)]
    struct KeyView<'a> {
        version: &'a str,
        job: &'a JobSpec,
    }
    let bytes = serde_json::to_vec(&KeyView { version: version(), job }).expect("jobs serialize");
    sha256_hex(&bytes)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct IndexEntry {
    file: String,
    digest: String,
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, CliError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    /// The `--cache` directory, or else `$PARCOHOM_CACHE`.
    pub fn locate(explicit: Option<&Path>) -> Option<PathBuf> {
        explicit
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
    }

    fn lock(&self) -> Result<File, CliError> {
        let f = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(self.dir.join("lock"))?;
        f.lock()?;
        Ok(f)
    }

    fn read_index(&self) -> Result<BTreeMap<String, IndexEntry>, CliError> {
        let path = self.dir.join("index.json");
        match fs::read(&path) {
            Ok(bytes) => Ok(serde_json::from_slice(&bytes).unwrap_or_default()),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(BTreeMap::new()),
            Err(e) => Err(e.into()),
        }
    }

    /// `None` on a miss or when the stored file no longer matches its digest.
    pub fn load(&self, key: &str) -> Result<Option<ResultEnvelope>, CliError> {
        let guard = self.lock()?;
        let index = self.read_index()?;
        let Some(entry) = index.get(key) else {
            return Ok(None);
        };
        let bytes = match fs::read(self.dir.join(&entry.file)) {
            Ok(b) => b,
            Err(_) => return Ok(None),
        };
        drop(guard);
        if sha256_hex(&bytes) != entry.digest {
            eprintln!("warning: cache entry {key} is corrupted, recomputing");
            return Ok(None);
        }
        Ok(serde_json::from_slice(&bytes).ok())
    }

    pub fn store(&self, key: &str, env: &ResultEnvelope) -> Result<(), CliError> {
        let bytes = serde_json::to_vec_pretty(env)?;
        let file = format!("{key}.json");
        let tmp = self.dir.join(format!("{key}.json.tmp"));
        fs::write(&tmp, &bytes)?;
        let _guard = self.lock()?;
        fs::rename(&tmp, self.dir.join(&file))?;
        let mut index = self.read_index()?;
        index.insert(
            key.to_string(),
            IndexEntry {
                file,
                digest: sha256_hex(&bytes),
            },
        );
        let idx_tmp = self.dir.join("index.json.tmp");
        fs::write(&idx_tmp, serde_json::to_vec_pretty(&index)?)?;
        fs::rename(idx_tmp, self.dir.join("index.json"))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::job::Command;

    #[test]
    fn key_ignores_destinations() {
        let mut a = JobSpec::new(Command::Cohomology, 11, 2, 5);
        let k = cache_key(&a);
        a.out = Some("/tmp/x.json".into());
        a.cache = Some("/tmp/c".into());
        assert_eq!(cache_key(&a), k);
        a.seed = 1;
        assert_ne!(cache_key(&a), k);
        let b = JobSpec::new(Command::Cohomology, 11, 3, 5);
        assert_ne!(cache_key(&b), k);
    }
}

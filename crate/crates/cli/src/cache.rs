//! Content-addressed store of deformation results, one JSON file per
//! provenance key.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

pub struct Cache {
    root: PathBuf,
}

impl Cache {
    pub fn new(root: PathBuf) -> Cache {
        Cache { root }
    }

    fn path(&self, key: &str) -> PathBuf {
        self.root.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Option<String> {
        fs::read_to_string(self.path(key)).ok()
    }

    /// Writes to a temporary file in the cache directory, then renames it
    /// into place so readers never see a partial entry.
    pub fn put(&self, key: &str, contents: &str) -> Result<()> {
        fs::create_dir_all(&self.root).with_context(|| format!("creating {}", self.root.display()))?;
        let tmp = self.root.join(format!(".{key}.{}.tmp", std::process::id()));
        write_file(&tmp, contents)?;
        fs::rename(&tmp, self.path(key)).with_context(|| format!("moving cache entry {key} into place"))
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    f.write_all(contents.as_bytes())?;
    f.sync_all()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::new(dir.path().join("nested"));
        assert_eq!(c.get("abc"), None);
        c.put("abc", "{}").unwrap();
        assert_eq!(c.get("abc").as_deref(), Some("{}"));
        assert_eq!(fs::read_dir(dir.path().join("nested")).unwrap().count(), 1);
    }
}

//! On-disk cache of field data, one JSON document per entry, written by
//! temp file and rename.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::descriptor::Descriptor;

pub const ENGINE_VERSION: &str = concat!("gammalab-", env!("CARGO_PKG_VERSION"), "/round2");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub degree: usize,
    /// Signed discriminant.
    pub discriminant: String,
    pub basis_denominators: Vec<String>,
    pub engine: String,
}

#[derive(Debug)]
pub enum CacheError {
    /// A corrupt entry that could not be removed.
    Corrupt(PathBuf, String),
    Io(String),
}

impl std::fmt::Display for CacheError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CacheError::Corrupt(p, e) => write!(
                f,
                "corrupt cache entry {} could not be removed: {e}",
                p.display()
            ),
            CacheError::Io(e) => write!(f, "cache i/o error: {e}"),
        }
    }
}

pub struct Cache {
    dir: PathBuf,
    pub warnings: Vec<String>,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Self, CacheError> {
        fs::create_dir_all(dir).map_err(|e| CacheError::Io(format!("{}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            warnings: Vec::new(),
        })
    }

    fn path(&self, key: &str) -> PathBuf {
        let h = Sha256::digest(key.as_bytes());
        self.dir.join(format!("{h:x}.json"))
    }

    fn discard(&mut self, path: &Path, why: &str) -> Result<(), CacheError> {
        self.warnings
            .push(format!("discarding cache entry {}: {why}", path.display()));
        fs::remove_file(path).map_err(|e| CacheError::Corrupt(path.to_path_buf(), e.to_string()))
    }

    fn read(&mut self, path: &Path) -> Result<Option<CacheEntry>, CacheError> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(CacheError::Io(e.to_string())),
        };
        match serde_json::from_str::<CacheEntry>(&text) {
            Ok(entry) => Ok(Some(entry)),
            Err(e) => {
                self.discard(path, &e.to_string())?;
                Ok(None)
            }
        }
    }

    pub fn get(&mut self, key: &str) -> Result<Option<CacheEntry>, CacheError> {
        let path = self.path(key);
        match self.read(&path)? {
            Some(e) if e.key == key && e.engine == ENGINE_VERSION => Ok(Some(e)),
            Some(_) => {
                self.discard(&path, "key or engine mismatch")?;
                Ok(None)
            }
            None => Ok(None),
        }
    }

    pub fn put(&self, entry: &CacheEntry) -> Result<(), CacheError> {
        let path = self.path(&entry.key);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        let io = |e: std::io::Error| CacheError::Io(e.to_string());
        let mut f = fs::File::create(&tmp).map_err(io)?;
        f.write_all(
            serde_json::to_string_pretty(entry)
                .expect("entry serializes")
                .as_bytes(),
        )
        .map_err(io)?;
        f.sync_all().map_err(io)?;
        fs::rename(&tmp, &path).map_err(io)
    }

    /// Every readable entry, sorted by key; unreadable ones are discarded.
    pub fn entries(&mut self) -> Result<Vec<CacheEntry>, CacheError> {
        let mut paths: Vec<PathBuf> = fs::read_dir(&self.dir)
            .map_err(|e| CacheError::Io(e.to_string()))?
            .filter_map(|d| d.ok().map(|d| d.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        let mut out = Vec::new();
        for p in paths {
            if let Some(e) = self.read(&p)? {
                out.push(e);
            }
        }
        out.sort_by(|a, b| a.key.cmp(&b.key));
        Ok(out)
    }
}

/// Round 2 data for a descriptor.
pub fn compute_entry(desc: &Descriptor, degree_cap: usize) -> gammalab_core::Result<CacheEntry> {
    let nf = desc.number_field(degree_cap)?;
    let basis_denominators = nf
        .integral_basis()
        .iter()
        .map(|row| {
            row.iter()
                .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
                .to_string()
        })
        .collect();
    Ok(CacheEntry {
        key: desc.to_string(),
        degree: nf.degree(),
        discriminant: nf.abs_disc().to_string(),
        basis_denominators,
        engine: ENGINE_VERSION.to_string(),
    })
}

/// Cached Round 2 data, computed and stored on a miss.
pub fn field_entry(
    cache: Option<&mut Cache>,
    desc: &Descriptor,
    degree_cap: usize,
) -> Result<CacheEntry, crate::RunError> {
    let key = desc.to_string();
    match cache {
        None => Ok(compute_entry(desc, degree_cap)?),
        Some(c) => {
            if let Some(e) = c.get(&key)? {
                return Ok(e);
            }
            let e = compute_entry(desc, degree_cap)?;
            c.put(&e)?;
            Ok(e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = Cache::open(dir.path()).unwrap();
        let d: Descriptor = "poly=-5,0,1".parse().unwrap();
        let e = compute_entry(&d, 24).unwrap();
        assert_eq!(e.discriminant, "5");
        assert_eq!(e.basis_denominators, vec!["1", "2"]);
        assert!(c.get(&e.key).unwrap().is_none());
        c.put(&e).unwrap();
        assert_eq!(c.get(&e.key).unwrap(), Some(e.clone()));
        fs::write(c.path(&e.key), "{not json").unwrap();
        assert!(c.get(&e.key).unwrap().is_none());
        assert_eq!(c.warnings.len(), 1);
        assert!(!c.path(&e.key).exists());
    }
}

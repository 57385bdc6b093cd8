//! On-disk cache of character tables, one JSON file per group fingerprint.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::char_table::{compute_character_table_with, CharacterTable, TableOptions};
use crate::error::{Error, Result};
use crate::group::{conjugacy_classes, FiniteGroup};

pub const CACHE_ENV: &str = "ZAFA_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".zafa-cache";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableDoc {
    pub hash: String,
    pub label: String,
    pub group_order: u64,
    pub degrees: Vec<u64>,
    pub class_sizes: Vec<u64>,
    /// Row-major `[re, im]` pairs.
    pub values: Vec<Vec<[f64; 2]>>,
}

impl From<&CharacterTable> for TableDoc {
    fn from(t: &CharacterTable) -> Self {
        Self {
            hash: t.group_hash().to_string(),
            label: t.label().to_string(),
            group_order: t.group_order(),
            degrees: t.degrees().to_vec(),
            class_sizes: t.class_sizes().to_vec(),
            values: (0..t.k())
                .map(|p| t.row(p).iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }
}

impl TableDoc {
    pub fn into_table(self) -> Result<CharacterTable> {
        let values = self
            .values
            .into_iter()
            .flatten()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        CharacterTable::from_parts(
            self.label,
            self.hash,
            self.group_order,
            self.class_sizes,
            self.degrees,
            values,
        )
    }
}

#[derive(Debug, Clone)]
pub struct TableCache {
    dir: PathBuf,
}

impl TableCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// Directory from `ZAFA_CACHE_DIR`, falling back to `./.zafa-cache`.
    pub fn from_env() -> Self {
        Self::new(std::env::var_os(CACHE_ENV).map_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR), PathBuf::from))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, hash: &str) -> PathBuf {
        self.dir.join(format!("{hash}.json"))
    }

    pub fn load(&self, hash: &str) -> Result<Option<CharacterTable>> {
        let path = self.path(hash);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let doc: TableDoc = serde_json::from_str(&text)?;
        if doc.hash != hash {
            return Err(Error::MalformedSpec(format!(
                "cache entry {} holds hash {}",
                path.display(),
                doc.hash
            )));
        }
        Ok(Some(doc.into_table()?))
    }

    pub fn store(&self, table: &CharacterTable) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        // unique temp file, so concurrent writers of one entry cannot collide
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(&serde_json::to_vec_pretty(&TableDoc::from(table))?)?;
        tmp.persist(self.path(table.group_hash())).map_err(|e| e.error)?;
        Ok(())
    }

    /// Returns the table and whether it was served from the cache. Cached
    /// tables are re-verified and relabelled for the requesting group.
    pub fn get_or_compute(&self, g: &FiniteGroup, opts: &TableOptions) -> Result<(CharacterTable, bool)> {
        let hash = g.fingerprint();
        if let Some(t) = self.load(&hash)? {
            if t.verify(opts.tolerances.table).is_ok() {
                let t = CharacterTable::from_parts(
                    g.label(),
                    hash,
                    t.group_order(),
                    t.class_sizes().to_vec(),
                    t.degrees().to_vec(),
                    t.values().to_vec(),
                )?;
                return Ok((t, true));
            }
        }
        let table = compute_character_table_with(g, &conjugacy_classes(g), opts)?;
        self.store(&table)?;
        Ok((table, false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog_group;

    #[test]
    fn cache_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::new(dir.path());
        let g = catalog_group("A5").unwrap();
        let (cold, hit) = cache.get_or_compute(&g, &TableOptions::default()).unwrap();
        assert!(!hit);
        let (warm, hit) = cache.get_or_compute(&g, &TableOptions::default()).unwrap();
        assert!(hit);
        assert_eq!(cold.values(), warm.values());
        assert_eq!(cold.degrees(), warm.degrees());
        assert_eq!(cold.label(), warm.label());
    }

    #[test]
    fn missing_entry_is_none() {
        let dir = tempfile::tempdir().unwrap();
        assert!(TableCache::new(dir.path()).load("nope").unwrap().is_none());
    }
}

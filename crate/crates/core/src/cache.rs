//! Q-index cache keyed by canonical form.
//!
//! One file per directory, one record per line:
//! `<canonical form hex> <q1> <tol> <tool version>`. Records are appended with
//! a single write each; the last record for a key wins on load.

use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use crate::canon::CanonicalForm;

pub const CACHE_FILE: &str = "qindex.cache";

#[derive(Debug, Clone, PartialEq)]
pub struct CacheEntry {
    pub key: String,
    pub q1: f64,
    pub tol: f64,
    pub tool_version: String,
}

impl CacheEntry {
    pub fn to_line(&self) -> String {
        format!("{} {:e} {:e} {}\n", self.key, self.q1, self.tol, self.tool_version)
    }

    pub fn parse(line: &str) -> Option<CacheEntry> {
        let mut parts = line.split_whitespace();
        let key = parts.next()?.to_string();
        CanonicalForm::from_hex(&key)?;
        let q1 = parts.next()?.parse().ok()?;
        let tol: f64 = parts.next()?.parse().ok()?;
        let tool_version = parts.next()?.to_string();
        if parts.next().is_some() || !(tol > 0.0) {
            return None;
        }
        Some(CacheEntry { key, q1, tol, tool_version })
    }
}

#[derive(Debug)]
pub struct QCache {
    path: PathBuf,
    entries: Mutex<HashMap<String, CacheEntry>>,
    hits: Mutex<usize>,
}

impl QCache {
    /// Opens (creating the directory if needed) the cache in `dir`.
    /// Unparseable lines are skipped.
    pub fn open(dir: &Path) -> io::Result<QCache> {
        fs::create_dir_all(dir)?;
        let path = dir.join(CACHE_FILE);
        let mut entries = HashMap::new();
        if path.exists() {
            for line in fs::read_to_string(&path)?.lines() {
                if let Some(e) = CacheEntry::parse(line) {
                    entries.insert(e.key.clone(), e);
                }
            }
        }
        Ok(QCache {
            path,
            entries: Mutex::new(entries),
            hits: Mutex::new(0),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Cached Q-index, used only if it was computed at least as tightly as `tol`.
    pub fn get(&self, key: &CanonicalForm, tol: f64) -> Option<f64> {
        let entries = self.entries.lock().expect("cache lock");
        let e = entries.get(&key.to_hex())?;
        (e.tol <= tol).then(|| {
            *self.hits.lock().expect("cache lock") += 1;
            e.q1
        })
    }

    pub fn put(&self, key: &CanonicalForm, q1: f64, tol: f64) -> io::Result<()> {
        let entry = CacheEntry {
            key: key.to_hex(),
            q1,
            tol,
            tool_version: crate::TOOL_VERSION.to_string(),
        };
        let mut entries = self.entries.lock().expect("cache lock");
        if entries.get(&entry.key).is_some_and(|e| e.tol <= tol) {
            return Ok(());
        }
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        f.write_all(entry.to_line().as_bytes())?;
        entries.insert(entry.key.clone(), entry);
        Ok(())
    }

    pub fn entries(&self) -> Vec<CacheEntry> {
        let mut v: Vec<CacheEntry> = self.entries.lock().expect("cache lock").values().cloned().collect();
        v.sort_by(|a, b| a.key.cmp(&b.key));
        v
    }

    pub fn hits(&self) -> usize {
        *self.hits.lock().expect("cache lock")
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_form;
    use crate::families;

    #[test]
    fn line_round_trip() {
        let e = CacheEntry {
            key: "05a0".into(),
            q1: 5.778457514497254,
            tol: 1e-10,
            tool_version: "0.1.0".into(),
        };
        assert_eq!(CacheEntry::parse(&e.to_line()), Some(e));
        assert_eq!(CacheEntry::parse("zz 1 1 v"), None);
        assert_eq!(CacheEntry::parse("05a0 1 0 v"), None);
        assert_eq!(CacheEntry::parse("05a0 1"), None);
    }

    #[test]
    fn tolerance_gate_and_persistence() {
        let dir = std::env::temp_dir().join(format!("qcache-unit-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        let key = canonical_form(&families::complete(4).unwrap());
        {
            let c = QCache::open(&dir).unwrap();
            c.put(&key, 6.0, 1e-10).unwrap();
            assert_eq!(c.get(&key, 1e-8), Some(6.0));
            assert_eq!(c.get(&key, 1e-12), None);
        }
        let reopened = QCache::open(&dir).unwrap();
        assert_eq!(reopened.len(), 1);
        assert_eq!(reopened.get(&key, 1e-10), Some(6.0));
        fs::remove_dir_all(&dir).unwrap();
    }
}

//! On-disk memoization of class groups and field enumerations: one
//! JSON-lines file per object kind, each line carrying its key, a sha256 of
//! the value, and the value itself. Writes go through a temp file and a
//! rename; corrupt entries surface as errors so callers can recompute and
//! rewrite.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::path::PathBuf;
use std::sync::Mutex;

use super::PipelineError;

#[derive(Debug, Serialize, Deserialize, Clone)]
struct CacheLine {
    key: i64,
    sha256: String,
    value: serde_json::Value,
}

#[derive(Default)]
struct KindStore {
    entries: BTreeMap<i64, CacheLine>,
    dirty: bool,
}

/// Disk-backed (or purely in-memory) cache keyed by (kind, discriminant).
pub struct Cache {
    dir: Option<PathBuf>,
    kinds: Mutex<HashMap<String, KindStore>>,
}

fn digest(value: &serde_json::Value) -> String {
    let canonical = serde_json::to_string(value).expect("serializing a Value cannot fail");
    let mut hasher = Sha256::new();
    hasher.update(canonical.as_bytes());
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

impl Cache {
    pub fn on_disk(dir: impl Into<PathBuf>) -> Cache {
        Cache {
            dir: Some(dir.into()),
            kinds: Mutex::new(HashMap::new()),
        }
    }

    /// A cache that never touches the filesystem.
    pub fn in_memory() -> Cache {
        Cache {
            dir: None,
            kinds: Mutex::new(HashMap::new()),
        }
    }

    fn kind_path(&self, kind: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{kind}.jsonl")))
    }

    fn ensure_loaded(&self, kinds: &mut HashMap<String, KindStore>, kind: &str) {
        if kinds.contains_key(kind) {
            return;
        }
        let mut store = KindStore::default();
        if let Some(path) = self.kind_path(kind) {
            if let Ok(text) = std::fs::read_to_string(&path) {
                for line in text.lines() {
                    if line.trim().is_empty() {
                        continue;
                    }
                    if let Ok(entry) = serde_json::from_str::<CacheLine>(line) {
                        store.entries.insert(entry.key, entry);
                    }
                    // unparseable lines are dropped; the rewrite on flush
                    // restores a clean file
                }
            }
        }
        kinds.insert(kind.to_string(), store);
    }

    /// Fetch a value. A checksum mismatch is a `CorruptCacheEntry`; absent
    /// keys are `Ok(None)`.
    pub fn get<T: DeserializeOwned>(&self, kind: &str, key: i64) -> Result<Option<T>, PipelineError> {
        let mut kinds = self.kinds.lock().unwrap();
        self.ensure_loaded(&mut kinds, kind);
        let store = kinds.get(kind).unwrap();
        let Some(entry) = store.entries.get(&key) else {
            return Ok(None);
        };
        if digest(&entry.value) != entry.sha256 {
            return Err(PipelineError::CorruptCacheEntry {
                kind: kind.to_string(),
                key,
            });
        }
        let value: T = serde_json::from_value(entry.value.clone()).map_err(|_| {
            PipelineError::CorruptCacheEntry {
                kind: kind.to_string(),
                key,
            }
        })?;
        Ok(Some(value))
    }

    pub fn put<T: Serialize>(&self, kind: &str, key: i64, value: &T) {
        let value = serde_json::to_value(value).expect("cache values serialize");
        let line = CacheLine {
            key,
            sha256: digest(&value),
            value,
        };
        let mut kinds = self.kinds.lock().unwrap();
        self.ensure_loaded(&mut kinds, kind);
        let store = kinds.get_mut(kind).unwrap();
        store.entries.insert(key, line);
        store.dirty = true;
    }

    /// Memoize: serve a sound cached value, otherwise compute and store.
    /// Corrupt entries fall back to recomputation and are rewritten.
    pub fn get_or_compute<T, F>(&self, kind: &str, key: i64, compute: F) -> T
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> T,
    {
        match self.get::<T>(kind, key) {
            Ok(Some(v)) => return v,
            Ok(None) => {}
            Err(PipelineError::CorruptCacheEntry { .. }) => {
                eprintln!("cache: corrupt {kind} entry for {key}, recomputing");
            }
            Err(_) => {}
        }
        let v = compute();
        self.put(kind, key, &v);
        v
    }

    /// Write every dirty kind to disk atomically (temp file, then rename).
    pub fn flush(&self) -> std::io::Result<()> {
        let Some(dir) = &self.dir else {
            return Ok(());
        };
        std::fs::create_dir_all(dir)?;
        let mut kinds = self.kinds.lock().unwrap();
        for (kind, store) in kinds.iter_mut() {
            if !store.dirty {
                continue;
            }
            let path = dir.join(format!("{kind}.jsonl"));
            let tmp = dir.join(format!("{kind}.jsonl.tmp"));
            {
                let mut f = std::fs::File::create(&tmp)?;
                for entry in store.entries.values() {
                    writeln!(f, "{}", serde_json::to_string(entry).unwrap())?;
                }
                f.sync_all()?;
            }
            std::fs::rename(&tmp, &path)?;
            store.dirty = false;
        }
        Ok(())
    }
}

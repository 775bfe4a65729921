//! Append-only JSON-lines store of minimal-genus records.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use metagenus::bounds::RecordStore;
use metagenus::genvec::{MinGenusRecord, ENGINE_VERSION};
use metagenus::groups::MetacyclicParams;
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: MetacyclicParams,
    pub value: MinGenusRecord,
    pub engine_version: String,
}

pub struct Cache {
    path: PathBuf,
    entries: Mutex<HashMap<MetacyclicParams, MinGenusRecord>>,
    file: Mutex<Option<File>>,
    /// Lines dropped on load: unparsable, foreign version or failed witness.
    pub rejected: usize,
}

impl Cache {
    pub fn open(path: &Path) -> std::io::Result<Cache> {
        let mut entries = HashMap::new();
        let mut rejected = 0;
        if path.exists() {
            for line in BufReader::new(File::open(path)?).lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<CacheEntry>(&line) {
                    Ok(e)
                        if e.engine_version == ENGINE_VERSION
                            && e.key == e.value.params
                            && e.value.revalidate() =>
                    {
                        entries.insert(e.key, e.value);
                    }
                    _ => rejected += 1,
                }
            }
        }
        Ok(Cache {
            path: path.to_path_buf(),
            entries: Mutex::new(entries),
            file: Mutex::new(None),
            rejected,
        })
    }

    fn append(&self, record: &MinGenusRecord) -> std::io::Result<()> {
        let mut file = self.file.lock().expect("cache lock");
        if file.is_none() {
            *file = Some(
                OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(&self.path)?,
            );
        }
        let entry = CacheEntry {
            key: record.params,
            value: record.clone(),
            engine_version: ENGINE_VERSION.to_string(),
        };
        let mut line = serde_json::to_string(&entry).expect("serializable");
        line.push('\n');
        let f = file.as_mut().expect("opened");
        f.write_all(line.as_bytes())?;
        f.flush()
    }
}

impl RecordStore for Cache {
    fn lookup(&self, params: MetacyclicParams) -> Option<MinGenusRecord> {
        self.entries
            .lock()
            .expect("cache lock")
            .get(&params)
            .cloned()
    }

    fn store(&self, record: &MinGenusRecord) {
        {
            let mut entries = self.entries.lock().expect("cache lock");
            if entries.contains_key(&record.params) {
                return;
            }
            entries.insert(record.params, record.clone());
        }
        if let Err(e) = self.append(record) {
            eprintln!("warning: cannot write cache {}: {e}", self.path.display());
        }
    }
}

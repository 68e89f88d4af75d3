//! Disk cache of computed u-expansions.
//!
//! One file per (artifact version, field, form, precision). The file name starts with the
//! SHA-256 of everything but the precision, so a request is served by any entry of the same
//! key with at least the requested precision, truncated. Each entry stores the SHA-256 of its
//! series text and is discarded when that no longer matches. All access holds an exclusive
//! advisory lock on `<dir>/.lock`.

use std::fs::{self, File, OpenOptions};
use std::path::{Path, PathBuf};

use hankel_core::algebra::Field;
use hankel_core::io::SeriesJson;
use hankel_core::series::USeries;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// Bumped whenever the entry layout changes.
const SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Entry {
    pub version: String,
    pub schema: u32,
    pub p: u32,
    pub e: u32,
    pub modulus: String,
    pub form: String,
    pub precision: i64,
    /// SHA-256 of the serialized series.
    pub digest: String,
    pub series: SeriesJson,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryInfo {
    pub file: String,
    pub form: String,
    pub q: u32,
    pub modulus: String,
    pub precision: i64,
    pub bytes: u64,
    pub valid: bool,
}

pub struct Cache {
    dir: PathBuf,
}

fn sha256_hex(text: &str) -> String {
    format!("{:x}", Sha256::digest(text.as_bytes()))
}

fn series_digest(series: &SeriesJson) -> String {
    sha256_hex(&serde_json::to_string(series).expect("series JSON is always serializable"))
}

fn key(field: &Field, form: &str) -> String {
    sha256_hex(&format!(
        "{}\n{SCHEMA}\n{}\n{}\n{}\n{form}",
        hankel_core::VERSION,
        field.p(),
        field.e(),
        field.modulus_text()
    ))
}

fn cache_err(e: impl std::fmt::Display) -> CliError {
    CliError::Cache(e.to_string())
}

impl Entry {
    fn matches(&self, field: &Field, form: &str) -> bool {
        self.version == hankel_core::VERSION
            && self.schema == SCHEMA
            && self.p == field.p()
            && self.e == field.e()
            && self.modulus == field.modulus_text()
            && self.form == form
    }

    fn digest_ok(&self) -> bool {
        series_digest(&self.series) == self.digest
    }
}

impl Cache {
    pub fn open(dir: &Path) -> CliResult<Cache> {
        fs::create_dir_all(dir).map_err(cache_err)?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Exclusive lock held until the returned file is dropped.
    fn lock(&self) -> CliResult<File> {
        let f = OpenOptions::new().create(true).truncate(false).write(true).open(self.dir.join(".lock")).map_err(cache_err)?;
        f.lock().map_err(cache_err)?;
        Ok(f)
    }

    /// Entries of one key as (precision, path), ascending in precision.
    fn candidates(&self, key: &str) -> CliResult<Vec<(i64, PathBuf)>> {
        let mut out = Vec::new();
        for item in fs::read_dir(&self.dir).map_err(cache_err)? {
            let path = item.map_err(cache_err)?.path();
            let Some(name) = path.file_name().and_then(|n| n.to_str()) else { continue };
            let Some(rest) = name.strip_prefix(key).and_then(|r| r.strip_prefix(".p")) else { continue };
            if let Some(p) = rest.strip_suffix(".json").and_then(|p| p.parse::<i64>().ok()) {
                out.push((p, path));
            }
        }
        out.sort();
        Ok(out)
    }

    fn read_entry(path: &Path) -> Option<Entry> {
        serde_json::from_str(&fs::read_to_string(path).ok()?).ok()
    }

    /// The cached series truncated to `precision`, if some valid entry reaches it.
    pub fn get(&self, field: &Field, form: &str, precision: i64) -> CliResult<Option<USeries>> {
        let _guard = self.lock()?;
        let k = key(field, form);
        for (p, path) in self.candidates(&k)? {
            if p < precision {
                continue;
            }
            let series = Self::read_entry(&path)
                .filter(|e| e.matches(field, form) && e.precision == p && e.digest_ok())
                .and_then(|e| e.series.to_series(field).ok());
            match series {
                Some(s) => return Ok(Some(s.truncate(precision))),
                // stale or corrupt: recompute rather than trust it
                None => {
                    let _ = fs::remove_file(&path);
                }
            }
        }
        Ok(None)
    }

    /// Stores `series`, computed at `precision`, and drops entries it supersedes.
    pub fn put(&self, field: &Field, form: &str, precision: i64, series: &USeries) -> CliResult<()> {
        let _guard = self.lock()?;
        let k = key(field, form);
        let existing = self.candidates(&k)?;
        if existing.iter().any(|(p, _)| *p >= precision) {
            return Ok(());
        }
        let js = SeriesJson::from_series(series);
        let entry = Entry {
            version: hankel_core::VERSION.to_string(),
            schema: SCHEMA,
            p: field.p(),
            e: field.e(),
            modulus: field.modulus_text(),
            form: form.to_string(),
            precision,
            digest: series_digest(&js),
            series: js,
        };
        let path = self.dir.join(format!("{k}.p{precision}.json"));
        let tmp = self.dir.join(format!(".{k}.p{precision}.tmp"));
        fs::write(&tmp, serde_json::to_string(&entry).map_err(cache_err)?).map_err(cache_err)?;
        fs::rename(&tmp, &path).map_err(cache_err)?;
        for (_, old) in existing {
            let _ = fs::remove_file(old);
        }
        Ok(())
    }

    pub fn list(&self) -> CliResult<Vec<EntryInfo>> {
        let _guard = self.lock()?;
        let mut out = Vec::new();
        for item in fs::read_dir(&self.dir).map_err(cache_err)? {
            let path = item.map_err(cache_err)?.path();
            let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default().to_string();
            if name.starts_with('.') || !name.ends_with(".json") {
                continue;
            }
            let bytes = fs::metadata(&path).map(|m| m.len()).unwrap_or(0);
            out.push(match Self::read_entry(&path) {
                Some(e) => EntryInfo {
                    valid: e.digest_ok() && e.version == hankel_core::VERSION && e.schema == SCHEMA,
                    file: name,
                    form: e.form,
                    q: e.p.pow(e.e),
                    modulus: e.modulus,
                    precision: e.precision,
                    bytes,
                },
                None => EntryInfo { file: name, form: "?".into(), q: 0, modulus: String::new(), precision: 0, bytes, valid: false },
            });
        }
        out.sort_by(|a, b| (a.q, &a.form, a.precision).cmp(&(b.q, &b.form, b.precision)));
        Ok(out)
    }

    /// Removes every entry; returns how many.
    pub fn clear(&self) -> CliResult<usize> {
        let _guard = self.lock()?;
        let mut n = 0;
        for item in fs::read_dir(&self.dir).map_err(cache_err)? {
            let path = item.map_err(cache_err)?.path();
            let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
            if name.ends_with(".json") || name.ends_with(".tmp") {
                fs::remove_file(&path).map_err(cache_err)?;
                n += 1;
            }
        }
        Ok(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hankel_core::forms::{FormContext, FormId};

    fn series(field: &Field, form: &str, p: i64) -> USeries {
        form.parse::<FormId>().unwrap().compute(&FormContext::new(field), p).unwrap()
    }

    #[test]
    fn higher_precision_serves_lower() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let f = Field::with_order(3).unwrap();
        assert!(cache.get(&f, "g", 20).unwrap().is_none());
        cache.put(&f, "g", 40, &series(&f, "g", 40)).unwrap();
        assert_eq!(cache.get(&f, "g", 20).unwrap().unwrap(), series(&f, "g", 20));
        assert!(cache.get(&f, "g", 41).unwrap().is_none());
        // a lower-precision put does not displace the stored entry
        cache.put(&f, "g", 10, &series(&f, "g", 10)).unwrap();
        assert_eq!(cache.list().unwrap().len(), 1);
        cache.put(&f, "g", 60, &series(&f, "g", 60)).unwrap();
        let listed = cache.list().unwrap();
        assert_eq!(listed.len(), 1);
        assert_eq!(listed[0].precision, 60);
    }

    #[test]
    fn keys_separate_fields_and_forms() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let f4 = Field::with_order(4).unwrap();
        let f3 = Field::with_order(3).unwrap();
        cache.put(&f4, "E", 20, &series(&f4, "E", 20)).unwrap();
        assert!(cache.get(&f3, "E", 10).unwrap().is_none());
        assert!(cache.get(&f4, "h", 10).unwrap().is_none());
        assert!(cache.get(&f4, "E", 10).unwrap().is_some());
    }

    #[test]
    fn tampered_entry_is_dropped() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let f = Field::with_order(2).unwrap();
        cache.put(&f, "E", 20, &series(&f, "E", 20)).unwrap();
        let info = &cache.list().unwrap()[0];
        let path = dir.path().join(&info.file);
        let text = fs::read_to_string(&path).unwrap().replacen("[2,\"1\"]", "[2,\"0\"]", 1);
        fs::write(&path, text).unwrap();
        assert!(!cache.list().unwrap()[0].valid);
        assert!(cache.get(&f, "E", 10).unwrap().is_none());
        assert!(cache.list().unwrap().is_empty());
        assert_eq!(cache.clear().unwrap(), 0);
    }
}

//! On-disk cache for the representation and invariant tables.
//!
//! Layout under the cache directory:
//!
//! ```text
//! rep/manifest.json   rep/qplus_<n>.json   rep/q_<n>.json   rep/p_<n>.json
//! inv/manifest.json   inv/inv_qplus.json   inv/inv_q.json   inv/inv_p.json
//! ```
//!
//! A cache is trusted only when its engine version matches and its caps
//! dominate the request; it is then truncated to the requested caps. Anything
//! unreadable is treated as a miss, logged, and overwritten.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use log::{info, warn};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::biseries::IntSeries;
use crate::error::{Error, Result};
use crate::invariant::InvTable;
use crate::recursion::{RepTable, ENGINE_VERSION};
use crate::symfun::{Caps, IntSym};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub engine_version: String,
    pub kind: String,
    pub caps: Caps,
    /// Seconds since the Unix epoch. Kept out of every data file so that
    /// those stay byte-identical across runs.
    pub written_at: u64,
}

pub struct Cache {
    root: PathBuf,
}

/// Whether a lookup was served from disk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Cache,
    Computed,
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().expect("cache files live in a directory");
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec(value)?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let bytes = fs::read(path)?;
    serde_json::from_slice(&bytes).map_err(|e| Error::CacheCorrupt { path: path.to_path_buf(), reason: e.to_string() })
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Cache { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn rep_dir(&self) -> PathBuf {
        self.root.join("rep")
    }

    fn inv_dir(&self) -> PathBuf {
        self.root.join("inv")
    }

    fn manifest(kind: &str, caps: Caps) -> Manifest {
        let written_at = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Manifest { engine_version: ENGINE_VERSION.to_string(), kind: kind.to_string(), caps, written_at }
    }

    /// Reads a manifest, returning it only if it can serve `caps`.
    fn usable_manifest(dir: &Path, kind: &str, caps: Caps) -> Result<Option<Manifest>> {
        let path = dir.join("manifest.json");
        if !path.exists() {
            return Ok(None);
        }
        let m: Manifest = read_json(&path)?;
        if m.kind != kind {
            return Err(Error::CacheCorrupt { path, reason: format!("manifest kind {} where {kind} was expected", m.kind) });
        }
        if m.engine_version != ENGINE_VERSION {
            info!("cache at {} was written by engine {}; ignoring", dir.display(), m.engine_version);
            return Ok(None);
        }
        Ok(m.caps.dominates(&caps).then_some(m))
    }

    pub fn store_rep(&self, table: &RepTable) -> Result<()> {
        let dir = self.rep_dir();
        for n in 0..=table.caps.n as usize {
            write_json(&dir.join(format!("qplus_{n}.json")), &table.qplus[n])?;
            write_json(&dir.join(format!("q_{n}.json")), &table.q[n])?;
            write_json(&dir.join(format!("p_{n}.json")), &table.p[n])?;
        }
        // The manifest goes last: its presence marks a complete write.
        write_json(&dir.join("manifest.json"), &Self::manifest("rep", table.caps))
    }

    pub fn load_rep(&self, caps: Caps) -> Result<Option<RepTable>> {
        let dir = self.rep_dir();
        let Some(m) = Self::usable_manifest(&dir, "rep", caps)? else { return Ok(None) };
        let load = |prefix: &str| -> Result<Vec<IntSym>> {
            (0..=caps.n)
                .map(|n| {
                    let path = dir.join(format!("{prefix}_{n}.json"));
                    let f: IntSym = read_json(&path)?;
                    if f.caps() != m.caps {
                        return Err(Error::CacheCorrupt { path, reason: "caps differ from manifest".into() });
                    }
                    f.trunc(caps.n, caps.k)
                })
                .collect()
        };
        Ok(Some(RepTable {
            caps,
            engine_version: m.engine_version.clone(),
            qplus: load("qplus")?,
            q: load("q")?,
            p: load("p")?,
        }))
    }

    pub fn store_inv(&self, table: &InvTable) -> Result<()> {
        let dir = self.inv_dir();
        write_json(&dir.join("inv_qplus.json"), &table.qplus)?;
        write_json(&dir.join("inv_q.json"), &table.q)?;
        write_json(&dir.join("inv_p.json"), &table.p)?;
        write_json(&dir.join("manifest.json"), &Self::manifest("inv", table.caps))
    }

    pub fn load_inv(&self, caps: Caps) -> Result<Option<InvTable>> {
        let dir = self.inv_dir();
        let Some(m) = Self::usable_manifest(&dir, "inv", caps)? else { return Ok(None) };
        let load = |name: &str| -> Result<IntSeries> {
            let path = dir.join(name);
            let s: IntSeries = read_json(&path)?;
            if s.caps() != m.caps {
                return Err(Error::CacheCorrupt { path, reason: "caps differ from manifest".into() });
            }
            s.truncate(caps.n, caps.k)
        };
        Ok(Some(InvTable {
            caps,
            engine_version: m.engine_version.clone(),
            qplus: load("inv_qplus.json")?,
            q: load("inv_q.json")?,
            p: load("inv_p.json")?,
        }))
    }

    /// Cached table if usable, otherwise computed and stored. Corrupt caches
    /// are reported and replaced.
    pub fn rep(&self, caps: Caps) -> Result<(RepTable, Source)> {
        match self.load_rep(caps) {
            Ok(Some(t)) => return Ok((t, Source::Cache)),
            Ok(None) => {}
            Err(e @ (Error::CacheCorrupt { .. } | Error::Io(_) | Error::TruncationOutOfRange { .. })) => {
                warn!("discarding representation cache: {e}")
            }
            Err(e) => return Err(e),
        }
        let t = RepTable::compute(caps)?;
        self.store_rep(&t)?;
        Ok((t, Source::Computed))
    }

    pub fn inv(&self, caps: Caps) -> Result<(InvTable, Source)> {
        match self.load_inv(caps) {
            Ok(Some(t)) => return Ok((t, Source::Cache)),
            Ok(None) => {}
            Err(e @ (Error::CacheCorrupt { .. } | Error::Io(_) | Error::TruncationOutOfRange { .. })) => {
                warn!("discarding invariant cache: {e}")
            }
            Err(e) => return Err(e),
        }
        let t = InvTable::compute(caps)?;
        self.store_inv(&t)?;
        Ok((t, Source::Computed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rep_round_trip_and_truncation() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let (t, src) = cache.rep(Caps::new(7, 5)).unwrap();
        assert_eq!(src, Source::Computed);
        let (again, src) = cache.rep(Caps::new(7, 5)).unwrap();
        assert_eq!(src, Source::Cache);
        assert_eq!(again, t);
        let (small, src) = cache.rep(Caps::new(6, 3)).unwrap();
        assert_eq!(src, Source::Cache);
        assert_eq!(small, RepTable::compute(Caps::new(6, 3)).unwrap());
        // Larger requests recompute.
        assert_eq!(cache.rep(Caps::new(8, 6)).unwrap().1, Source::Computed);
    }

    #[test]
    fn inv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let (t, _) = cache.inv(Caps::new(20, 18)).unwrap();
        let (small, src) = cache.inv(Caps::new(12, 4)).unwrap();
        assert_eq!(src, Source::Cache);
        assert_eq!(small, InvTable::compute(Caps::new(12, 4)).unwrap());
        assert_eq!(cache.load_inv(Caps::new(20, 18)).unwrap().unwrap(), t);
    }

    #[test]
    fn corrupt_cache_is_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let (t, _) = cache.rep(Caps::new(5, 3)).unwrap();
        fs::write(dir.path().join("rep/q_4.json"), b"{not json").unwrap();
        assert!(matches!(cache.load_rep(Caps::new(5, 3)), Err(Error::CacheCorrupt { .. })));
        let (again, src) = cache.rep(Caps::new(5, 3)).unwrap();
        assert_eq!(src, Source::Computed);
        assert_eq!(again, t);
    }

    #[test]
    fn foreign_version_is_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        cache.inv(Caps::new(6, 4)).unwrap();
        let path = dir.path().join("inv/manifest.json");
        let mut m: Manifest = read_json(&path).unwrap();
        m.engine_version = "0.0.0-other".into();
        write_json(&path, &m).unwrap();
        assert!(cache.load_inv(Caps::new(6, 4)).unwrap().is_none());
    }
}

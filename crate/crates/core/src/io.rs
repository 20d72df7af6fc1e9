//! Matrix exchange files and the on-disk group cache.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use log::{debug, warn};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::ResidueRing;
use crate::group::{MatrixGroup, DEFAULT_CLOSURE_CAP};
use crate::lift::{GroupProvider, LiftPath};
use crate::matrix::ResidueMatrix;
use crate::sl2::RepresentationSpec;

pub const MATRIX_SCHEMA: u32 = 1;
pub const CACHE_ENV: &str = "MODLIFT_CACHE_DIR";

/// One matrix over `Z/p^sZ`, as JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub schema: u32,
    pub p: u64,
    pub s: u32,
    pub rows: usize,
    pub cols: usize,
    /// Row-major, each in `[0, p^s)`.
    pub entries: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ResidueMatrix, block_size: Option<usize>, label: Option<String>) -> Self {
        let ring = m.ring();
        MatrixFile {
            schema: MATRIX_SCHEMA,
            p: ring.p(),
            s: ring.s(),
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().to_vec(),
            block_size,
            label,
        }
    }

    pub fn to_matrix(&self) -> Result<ResidueMatrix> {
        if self.schema != MATRIX_SCHEMA {
            return Err(Error::InvalidParameter(format!("unsupported schema {}", self.schema)));
        }
        let ring = ResidueRing::new(self.p, self.s)?;
        if let Some(&bad) = self.entries.iter().find(|&&v| v >= ring.modulus()) {
            return Err(Error::InvalidParameter(format!("entry {bad} outside [0, {})", ring.modulus())));
        }
        if let Some(r) = self.block_size {
            if r == 0 || self.rows % r != 0 || self.cols % r != 0 {
                return Err(Error::DimensionMismatch(format!("block size {r} does not divide {}x{}", self.rows, self.cols)));
            }
        }
        ResidueMatrix::from_entries(ring, self.rows, self.cols, self.entries.clone())
    }

    /// Pretty JSON with one matrix row per line.
    pub fn to_json(&self) -> String {
        let mut out = format!(
            "{{\n  \"schema\": {},\n  \"p\": {},\n  \"s\": {},\n  \"rows\": {},\n  \"cols\": {},\n  \"entries\": [",
            self.schema, self.p, self.s, self.rows, self.cols
        );
        let width = self.cols.max(1);
        for (i, chunk) in self.entries.chunks(width).enumerate() {
            let row: Vec<String> = chunk.iter().map(u64::to_string).collect();
            out.push_str(if i == 0 { "\n    " } else { ",\n    " });
            out.push_str(&row.join(", "));
        }
        out.push_str(if self.entries.is_empty() { "]" } else { "\n  ]" });
        if let Some(r) = self.block_size {
            out.push_str(&format!(",\n  \"block_size\": {r}"));
        }
        if let Some(label) = &self.label {
            out.push_str(&format!(",\n  \"label\": {}", serde_json::Value::from(label.as_str())));
        }
        out.push_str("\n}\n");
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MatrixFile = serde_json::from_str(text)?;
        file.to_matrix()?;
        Ok(file)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Hash of the generators a group is closed from.
pub fn generators_key(generators: &[ResidueMatrix]) -> String {
    let mut h = Sha256::new();
    for g in generators {
        h.update(g.ring().modulus().to_le_bytes());
        h.update((g.rows() as u64).to_le_bytes());
        for v in g.entries() {
            h.update(v.to_le_bytes());
        }
    }
    hex::encode(h.finalize())
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    key: String,
    /// sha256 of the serialised group.
    digest: String,
    group: serde_json::Value,
}

/// Group tables stored as JSON under a directory. A stored table is used only when both the
/// generator hash and the content hash match; anything else is rebuilt and overwritten.
pub struct GroupCache {
    dir: PathBuf,
    cap: usize,
    hits: AtomicUsize,
    builds: AtomicUsize,
}

impl GroupCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(GroupCache { dir, cap: DEFAULT_CLOSURE_CAP, hits: AtomicUsize::new(0), builds: AtomicUsize::new(0) })
    }

    /// The cache named by `MODLIFT_CACHE_DIR`, if set.
    pub fn from_env() -> Result<Option<Self>> {
        match std::env::var_os(CACHE_ENV) {
            Some(dir) if !dir.is_empty() => Self::new(dir).map(Some),
            _ => Ok(None),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn builds(&self) -> usize {
        self.builds.load(Ordering::Relaxed)
    }

    pub fn entry_path(&self, spec: &RepresentationSpec, path: LiftPath) -> PathBuf {
        let label: String = spec
            .label()
            .chars()
            .map(|c| match c {
                '*' => 'd',
                '^' => 't',
                c => c,
            })
            .collect();
        self.dir.join(format!("q{}-{}-{}-l1.json", spec.q(), label, path))
    }

    fn load(&self, file: &Path, key: &str) -> Option<MatrixGroup> {
        let text = fs::read_to_string(file).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        if entry.key != key {
            debug!("cache key mismatch at {}", file.display());
            return None;
        }
        let payload = serde_json::to_string(&entry.group).ok()?;
        if sha256_hex(payload.as_bytes()) != entry.digest {
            warn!("cache digest mismatch at {}; rebuilding", file.display());
            return None;
        }
        let group: MatrixGroup = serde_json::from_value(entry.group).ok()?;
        let group = group.rehydrate().ok()?;
        group.verify_table().then_some(group)
    }

    fn store(&self, file: &Path, key: &str, group: &MatrixGroup) -> Result<()> {
        let value = serde_json::to_value(group)?;
        let digest = sha256_hex(serde_json::to_string(&value)?.as_bytes());
        let entry = CacheEntry { key: key.to_string(), digest, group: value };
        let tmp = file.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_string(&entry)?)?;
        fs::rename(&tmp, file)?;
        Ok(())
    }
}

impl GroupProvider for GroupCache {
    fn group(&self, spec: &RepresentationSpec, path: LiftPath, generators: &[ResidueMatrix]) -> Result<Arc<MatrixGroup>> {
        let file = self.entry_path(spec, path);
        let key = generators_key(generators);
        if let Some(group) = self.load(&file, &key) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(Arc::new(group));
        }
        let group = MatrixGroup::close(generators, self.cap)?;
        self.builds.fetch_add(1, Ordering::Relaxed);
        self.store(&file, &key, &group)?;
        Ok(Arc::new(group))
    }
}

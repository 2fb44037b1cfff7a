//! On-disk cache of per-level radical-exponent counts.
//!
//! Entries are keyed by the SHA-256 of the canonical structure constants, the
//! level and the exponent bound, and hold the counts as decimal strings.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use orbitzeta_core::zeta::LevelCounts;
use sha2::{Digest, Sha256};

pub const DEFAULT_DIR: &str = ".orbitzeta-cache";

#[derive(Clone, Debug)]
pub struct LevelCache {
    dir: Option<PathBuf>,
    key: String,
}

impl LevelCache {
    /// A cache for the algebra whose canonical structure JSON is `structure`;
    /// `dir = None` disables it.
    pub fn new(dir: Option<&Path>, structure: &str) -> Self {
        Self {
            dir: dir.map(Path::to_path_buf),
            key: hex::encode(Sha256::digest(structure.as_bytes())),
        }
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    fn path(&self, level: u32, max_exp: Option<u32>) -> Option<PathBuf> {
        let bound = max_exp.map_or("all".to_string(), |e| e.to_string());
        self.dir
            .as_ref()
            .map(|d| d.join(format!("{}-k{level}-e{bound}.json", self.key)))
    }

    pub fn get_or_compute(
        &self,
        level: u32,
        max_exp: Option<u32>,
        compute: impl FnOnce() -> orbitzeta_core::Result<LevelCounts>,
    ) -> orbitzeta_core::Result<LevelCounts> {
        let Some(path) = self.path(level, max_exp) else {
            return compute();
        };
        if let Some(counts) = read_counts(&path) {
            return Ok(counts);
        }
        let counts = compute()?;
        // A cache that cannot be written is only a missed optimization.
        let _ = write_counts(&path, &counts);
        Ok(counts)
    }
}

fn read_counts(path: &Path) -> Option<LevelCounts> {
    let text = std::fs::read_to_string(path).ok()?;
    let raw: BTreeMap<u32, String> = serde_json::from_str(&text).ok()?;
    raw.into_iter()
        .map(|(e, c)| c.parse::<BigUint>().ok().map(|c| (e, c)))
        .collect()
}

fn write_counts(path: &Path, counts: &LevelCounts) -> std::io::Result<()> {
    let dir = path.parent().expect("cache entries live in a directory");
    std::fs::create_dir_all(dir)?;
    let raw: BTreeMap<u32, String> = counts.iter().map(|(&e, c)| (e, c.to_string())).collect();
    let tmp = tempfile::NamedTempFile::new_in(dir)?;
    serde_json::to_writer(&tmp, &raw)?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

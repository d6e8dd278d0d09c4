//! On-disk cache of Bäcklund coefficients and currents, guarded by SHA-256 digests.

use std::collections::BTreeMap;
use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use sg_core::backlund::{BacklundTable, Coupling};
use sg_core::jet_algebra::Expr;

pub const CACHE_SCHEMA_VERSION: u32 = 1;
const MANIFEST: &str = "manifest.json";
pub const BACKLUND_FILE: &str = "backlund.json";
pub const CURRENTS_FILE: &str = "currents.json";

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheManifest {
    pub schema_version: u32,
    pub max_nu: Option<usize>,
    #[serde(rename = "max_N")]
    pub max_n: Option<usize>,
    /// Hex SHA-256 of each artifact file, keyed by file name.
    pub digests: BTreeMap<String, String>,
}

impl CacheManifest {
    fn empty() -> Self {
        Self {
            schema_version: CACHE_SCHEMA_VERSION,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CachedCurrent {
    #[serde(rename = "N")]
    pub n: usize,
    pub s1: Expr,
    pub s2: Expr,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Errors from this type are environment or corruption failures.
pub struct Cache {
    dir: PathBuf,
    manifest: CacheManifest,
}

impl Cache {
    pub fn open(dir: &Path) -> anyhow::Result<Self> {
        let path = dir.join(MANIFEST);
        let manifest = match fs::read(&path) {
            Ok(bytes) => {
                let m: CacheManifest = serde_json::from_slice(&bytes)
                    .with_context(|| format!("corrupt cache manifest {}", path.display()))?;
                if m.schema_version != CACHE_SCHEMA_VERSION {
                    eprintln!(
                        "sg: cache schema {} differs from {}, recomputing",
                        m.schema_version, CACHE_SCHEMA_VERSION
                    );
                    CacheManifest::empty()
                } else {
                    m
                }
            }
            Err(e) if e.kind() == ErrorKind::NotFound => CacheManifest::empty(),
            Err(e) => return Err(e).with_context(|| format!("cannot read {}", path.display())),
        };
        Ok(Self {
            dir: dir.to_path_buf(),
            manifest,
        })
    }

    #[cfg(test)]
    pub fn manifest(&self) -> &CacheManifest {
        &self.manifest
    }

    /// Contents of `name` if the manifest records it and the digest matches.
    fn read_verified(&self, name: &str) -> anyhow::Result<Option<Vec<u8>>> {
        let Some(want) = self.manifest.digests.get(name) else {
            return Ok(None);
        };
        let path = self.dir.join(name);
        let bytes = fs::read(&path).with_context(|| format!("cache file {} is listed but unreadable", path.display()))?;
        let got = sha256_hex(&bytes);
        if &got != want {
            bail!("digest mismatch for {}: manifest {want}, file {got}", path.display());
        }
        Ok(Some(bytes))
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> anyhow::Result<()> {
        fs::create_dir_all(&self.dir).with_context(|| format!("cannot create {}", self.dir.display()))?;
        let path = self.dir.join(name);
        fs::write(&path, bytes).with_context(|| format!("cannot write {}", path.display()))?;
        self.manifest.digests.insert(name.to_string(), sha256_hex(bytes));
        let manifest = serde_json::to_vec_pretty(&self.manifest)?;
        let mpath = self.dir.join(MANIFEST);
        fs::write(&mpath, manifest).with_context(|| format!("cannot write {}", mpath.display()))?;
        Ok(())
    }

    /// `A₀ … A_{max_nu}`, from the cache when it is deep enough.
    pub fn backlund_table(&mut self, max_nu: usize) -> anyhow::Result<BacklundTable> {
        let cached = match self.read_verified(BACKLUND_FILE)? {
            Some(bytes) => {
                let coeffs: Vec<Expr> = serde_json::from_slice(&bytes).context("corrupt cached coefficients")?;
                if Some(coeffs.len()) != self.manifest.max_nu.map(|m| m + 1) {
                    bail!("cached coefficient count disagrees with the manifest");
                }
                Some(BacklundTable::from_coefficients(Coupling::Symbolic, coeffs).map_err(|e| anyhow!(e))?)
            }
            None => None,
        };
        let mut table = match cached {
            Some(t) if t.max_nu() >= max_nu => {
                eprintln!("sg: cache hit for A_0..A_{max_nu}");
                let coeffs = t.coefficients()[..=max_nu].to_vec();
                return BacklundTable::from_coefficients(Coupling::Symbolic, coeffs).map_err(|e| anyhow!(e));
            }
            Some(t) => t,
            None => BacklundTable::new(Coupling::Symbolic),
        };
        if max_nu > table.max_nu() {
            eprintln!("sg: computing A_{}..A_{max_nu}", table.max_nu() + 1);
            table.extend_to(max_nu);
        }
        let bytes = serde_json::to_vec(table.coefficients())?;
        self.manifest.max_nu = Some(max_nu);
        self.write(BACKLUND_FILE, &bytes)?;
        Ok(table)
    }

    /// `(s₁ᴺ, s₂ᴺ)` for `N = 0…max_n` if cached, in order.
    pub fn currents(&self, max_n: usize) -> anyhow::Result<Option<Vec<CachedCurrent>>> {
        let Some(bytes) = self.read_verified(CURRENTS_FILE)? else {
            return Ok(None);
        };
        let all: Vec<CachedCurrent> = serde_json::from_slice(&bytes).context("corrupt cached currents")?;
        if all.iter().enumerate().any(|(i, c)| c.n != i) || Some(all.len()) != self.manifest.max_n.map(|m| m + 1) {
            bail!("cached currents disagree with the manifest");
        }
        if all.len() <= max_n {
            return Ok(None);
        }
        Ok(Some(all.into_iter().take(max_n + 1).collect()))
    }

    pub fn store_currents(&mut self, currents: &[CachedCurrent]) -> anyhow::Result<()> {
        if currents.len() <= self.manifest.max_n.map_or(0, |m| m + 1) {
            return Ok(());
        }
        let bytes = serde_json::to_vec(currents)?;
        self.manifest.max_n = Some(currents.len() - 1);
        self.write(CURRENTS_FILE, &bytes)
    }
}

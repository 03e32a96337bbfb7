//! On-disk cache of quotient components. One JSON record per (presentation, arity,
//! ambient); a record is used only if its presentation hash and monomial list match
//! what the current build enumerates.

use std::fs;
use std::path::{Path, PathBuf};

use ramop_core::component::{Component, OperadWorkspace};
use ramop_core::graph::{AlgebraComponent, GraphWorkspace};
use ramop_core::linear::{Echelon, SparseVec};
use ramop_core::Rational;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const CACHE_FORMAT: u32 = 1;
pub const ENV_VAR: &str = "RAMOP_CACHE_DIR";
pub const DEFAULT_DIR: &str = ".ramop-cache";
const PREFIX: &str = "component-";

pub fn presentation_hash(fingerprint: &str) -> String {
    let digest = Sha256::digest(fingerprint.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Record {
    pub format: u32,
    pub presentation: String,
    pub hash: String,
    pub arity: usize,
    /// `None` for operads, the ambient mode for graph algebras.
    pub mode: Option<String>,
    pub monomials: Vec<String>,
    pub rows: Vec<Vec<(usize, String)>>,
}

impl Record {
    fn rows_of(e: &Echelon) -> Vec<Vec<(usize, String)>> {
        e.rows()
            .iter()
            .map(|r| r.iter().map(|(c, v)| (*c, v.to_string())).collect())
            .collect()
    }

    fn echelon(&self) -> Option<Echelon> {
        let mut rows = Vec::with_capacity(self.rows.len());
        for r in self.rows.iter() {
            let mut entries = Vec::with_capacity(r.len());
            for (c, v) in r {
                entries.push((*c, v.parse::<Rational>().ok()?));
            }
            rows.push(SparseVec::from_entries(entries));
        }
        Echelon::from_reduced_rows(self.monomials.len(), rows)
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct EntryInfo {
    pub file: String,
    pub presentation: String,
    pub arity: usize,
    pub mode: Option<String>,
    pub bytes: u64,
}

#[derive(Clone, Debug)]
pub struct Cache {
    pub dir: PathBuf,
}

impl Cache {
    /// Flag, else `RAMOP_CACHE_DIR`, else `./.ramop-cache`.
    pub fn resolve(flag: Option<PathBuf>) -> Cache {
        let dir = flag
            .or_else(|| std::env::var_os(ENV_VAR).filter(|v| !v.is_empty()).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_DIR));
        Cache { dir }
    }

    fn path(&self, hash: &str, mode: Option<&str>, arity: usize) -> PathBuf {
        let mode = mode.unwrap_or("operad");
        self.dir.join(format!("{PREFIX}{}-{mode}-{arity}.json", &hash[..16]))
    }

    fn read(&self, hash: &str, mode: Option<&str>, arity: usize) -> Option<Record> {
        let text = fs::read_to_string(self.path(hash, mode, arity)).ok()?;
        let rec: Record = serde_json::from_str(&text).ok()?;
        let ok = rec.format == CACHE_FORMAT
            && rec.hash == hash
            && rec.arity == arity
            && rec.mode.as_deref() == mode
            && rec.echelon().is_some();
        ok.then_some(rec)
    }

    /// Written to a temporary file and renamed, so concurrent writers of the same entry
    /// leave one complete record.
    fn write(&self, rec: &Record) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path(&rec.hash, rec.mode.as_deref(), rec.arity);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(rec)?)?;
        fs::rename(&tmp, &path)
    }

    /// Inserts every cached component of arity `1..=n` into `ws`; returns how many.
    pub fn load_operad(&self, ws: &mut OperadWorkspace, n: usize) -> usize {
        let hash = presentation_hash(&ws.presentation.fingerprint());
        let mut loaded = 0;
        for k in 1..=n.min(ws.limits.max_arity) {
            let Some(rec) = self.read(&hash, None, k) else { continue };
            let Some(e) = rec.echelon() else { continue };
            let Ok(c) = Component::from_reducer(&ws.presentation, k, e) else { continue };
            if c.monomials.iter().map(|t| t.to_string()).eq(rec.monomials.iter().cloned()) {
                ws.insert(c);
                loaded += 1;
            }
        }
        loaded
    }

    pub fn store_operad(&self, ws: &OperadWorkspace) -> std::io::Result<()> {
        let hash = presentation_hash(&ws.presentation.fingerprint());
        for c in ws.cached() {
            if self.read(&hash, None, c.n).is_some() {
                continue;
            }
            self.write(&Record {
                format: CACHE_FORMAT,
                presentation: ws.presentation.name.to_string(),
                hash: hash.clone(),
                arity: c.n,
                mode: None,
                monomials: c.monomials.iter().map(|t| t.to_string()).collect(),
                rows: Record::rows_of(&c.quotient.reducer),
            })?;
        }
        Ok(())
    }

    pub fn load_graph(&self, ws: &mut GraphWorkspace, n: usize) -> usize {
        let hash = presentation_hash(&ws.presentation.fingerprint());
        let mode = ws.mode.name();
        let mut loaded = 0;
        for k in 1..=n.min(ws.limits.max_arity) {
            let Some(rec) = self.read(&hash, Some(mode), k) else { continue };
            let Some(e) = rec.echelon() else { continue };
            let Ok(c) = AlgebraComponent::from_reducer(&ws.presentation, k, ws.mode, e) else { continue };
            if c.monomials.iter().map(|m| m.to_string()).eq(rec.monomials.iter().cloned()) {
                ws.insert(c);
                loaded += 1;
            }
        }
        loaded
    }

    pub fn store_graph(&self, ws: &GraphWorkspace) -> std::io::Result<()> {
        let hash = presentation_hash(&ws.presentation.fingerprint());
        let mode = ws.mode.name();
        for c in ws.cached() {
            if self.read(&hash, Some(mode), c.n).is_some() {
                continue;
            }
            self.write(&Record {
                format: CACHE_FORMAT,
                presentation: ws.presentation.name.to_string(),
                hash: hash.clone(),
                arity: c.n,
                mode: Some(mode.to_string()),
                monomials: c.monomials.iter().map(|m| m.to_string()).collect(),
                rows: Record::rows_of(&c.quotient.reducer),
            })?;
        }
        Ok(())
    }

    fn entries(&self) -> std::io::Result<Vec<PathBuf>> {
        let mut out = Vec::new();
        let rd = match fs::read_dir(&self.dir) {
            Ok(rd) => rd,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
            Err(e) => return Err(e),
        };
        for ent in rd {
            let p = ent?.path();
            if is_entry(&p) {
                out.push(p);
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn info(&self) -> std::io::Result<Vec<EntryInfo>> {
        let mut out = Vec::new();
        for p in self.entries()? {
            let bytes = fs::metadata(&p)?.len();
            let rec: Option<Record> = fs::read_to_string(&p).ok().and_then(|t| serde_json::from_str(&t).ok());
            let file = p.file_name().unwrap_or_default().to_string_lossy().into_owned();
            match rec {
                Some(r) => out.push(EntryInfo {
                    file,
                    presentation: r.presentation,
                    arity: r.arity,
                    mode: r.mode,
                    bytes,
                }),
                None => out.push(EntryInfo {
                    file,
                    presentation: "unreadable".into(),
                    arity: 0,
                    mode: None,
                    bytes,
                }),
            }
        }
        Ok(out)
    }

    /// Removes cache entries only; other files in the directory are left alone.
    pub fn clear(&self) -> std::io::Result<usize> {
        let entries = self.entries()?;
        for p in entries.iter() {
            fs::remove_file(p)?;
        }
        Ok(entries.len())
    }
}

fn is_entry(p: &Path) -> bool {
    p.file_name()
        .and_then(|n| n.to_str())
        .is_some_and(|n| n.starts_with(PREFIX) && n.ends_with(".json"))
}

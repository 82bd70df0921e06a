//! On-disk dossier cache keyed by the field record, the precision settings
//! and the code version.

use crate::{FieldDossier, PipelineConfig, CODE_VERSION};
use cmcert::fieldenum::FieldDbRow;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "CM_CERT_CACHE";

pub fn dir_from_env() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

pub fn key(row: &FieldDbRow, cfg: &PipelineConfig) -> String {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(row).expect("field rows serialize"));
    // everything that changes the dossier contents
    let settings = serde_json::json!({
        "prec": cfg.prec,
        "prec_cap": cfg.prec_cap,
        "seed": cfg.seed,
        "stage": cfg.stage,
        "checks": cfg.checks,
        "eps": cfg.eps,
        "gamma_f": cfg.gamma_f.to_string(),
        "h0": cfg.h0.to_string(),
    });
    h.update(settings.to_string().as_bytes());
    h.update(CODE_VERSION.as_bytes());
    h.finalize().iter().map(|b| format!("{:02x}", b)).collect()
}

fn path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{}.json", key))
}

/// A cached dossier, if present and readable for this code version.
pub fn load(dir: &Path, key: &str) -> Option<FieldDossier> {
    let s = std::fs::read_to_string(path(dir, key)).ok()?;
    let d: FieldDossier = serde_json::from_str(&s).ok()?;
    (d.version == CODE_VERSION).then_some(d)
}

pub fn store(dir: &Path, key: &str, d: &FieldDossier) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!("{}.tmp", key));
    std::fs::write(&tmp, serde_json::to_vec_pretty(d)?)?;
    std::fs::rename(tmp, path(dir, key))
}

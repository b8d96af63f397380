//! Persistent Bernoulli-number cache: `k<TAB>num/den` lines, one per index.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use gds_core::bernoulli::{format_cache, parse_cache, table};

pub const ENV_VAR: &str = "GDS_CACHE";

/// `--cache` if given, else `$GDS_CACHE` if non-empty.
pub fn resolve(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| std::env::var_os(ENV_VAR).filter(|v| !v.is_empty()).map(PathBuf::from))
}

/// Preloads the global table from `path` if it exists. Returns the number
/// of entries read.
pub fn load(path: &Path) -> Result<usize, String> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(0),
        Err(e) => return Err(format!("cannot read cache {}: {e}", path.display())),
    };
    let values = parse_cache(&text).map_err(|e| format!("cache {}: {e}", path.display()))?;
    table().preload(&values).map_err(|e| format!("cache {}: {e}", path.display()))?;
    Ok(values.len())
}

/// Writes the table back when it grew past what was loaded.
pub fn store(path: &Path, loaded: usize) -> Result<(), String> {
    let values = table().snapshot();
    if values.len() <= loaded {
        return Ok(());
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, format_cache(&values))
        .and_then(|_| fs::rename(&tmp, path))
        .map_err(|e| format!("cannot write cache {}: {e}", path.display()))
}

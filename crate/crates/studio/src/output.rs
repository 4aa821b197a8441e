//! Writing a generation result to disk.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use studio_core::codegen::{is_safe_rel_path, MANIFEST_FILE};
use studio_core::GenerationResult;

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error("output directory {} is not empty", .0.display())]
    NonEmpty(PathBuf),
    #[error("artifact path `{0}` is not a safe relative path")]
    UnsafePath(String),
    #[error("artifact path `{0}` is listed twice")]
    DuplicatePath(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl OutputError {
    pub fn code(&self) -> &'static str {
        match self {
            OutputError::NonEmpty(_) => "NON_EMPTY_OUTPUT",
            OutputError::UnsafePath(_) | OutputError::DuplicatePath(_) => "UNSAFE_PATH",
            OutputError::Io { .. } => "IO",
        }
    }
}

/// Writes every artifact under `out_dir`, then `manifest.json`, and returns
/// the manifest path.
///
/// `out_dir` must be absent or empty. Paths are checked before anything is
/// written; on an I/O failure everything written so far is removed again.
pub fn write_output(result: &GenerationResult, out_dir: &Path) -> Result<PathBuf, OutputError> {
    let mut seen = std::collections::BTreeSet::new();
    for a in &result.artifacts {
        if !is_safe_rel_path(&a.rel_path) {
            return Err(OutputError::UnsafePath(a.rel_path.clone()));
        }
        if !seen.insert(a.rel_path.as_str()) {
            return Err(OutputError::DuplicatePath(a.rel_path.clone()));
        }
    }

    let created = match fs::read_dir(out_dir) {
        Ok(mut entries) => {
            if entries.next().is_some() {
                return Err(OutputError::NonEmpty(out_dir.to_path_buf()));
            }
            false
        }
        Err(e) if e.kind() == io::ErrorKind::NotFound => {
            fs::create_dir_all(out_dir).map_err(|source| OutputError::Io {
                path: out_dir.to_path_buf(),
                source,
            })?;
            true
        }
        Err(source) => {
            return Err(OutputError::Io {
                path: out_dir.to_path_buf(),
                source,
            })
        }
    };

    let manifest_path = out_dir.join(MANIFEST_FILE);
    let write_all = || -> Result<(), (PathBuf, io::Error)> {
        for a in &result.artifacts {
            let path = out_dir.join(&a.rel_path);
            if let Some(parent) = path.parent() {
                fs::create_dir_all(parent).map_err(|e| (parent.to_path_buf(), e))?;
            }
            fs::write(&path, &a.bytes).map_err(|e| (path.clone(), e))?;
        }
        fs::write(&manifest_path, result.manifest_json()).map_err(|e| (manifest_path.clone(), e))
    };
    if let Err((path, source)) = write_all() {
        clear(out_dir, created);
        return Err(OutputError::Io { path, source });
    }
    Ok(manifest_path)
}

/// Removes partial output: the whole directory if this call created it,
/// otherwise only its (previously empty) contents.
fn clear(out_dir: &Path, created: bool) {
    if created {
        let _ = fs::remove_dir_all(out_dir);
        return;
    }
    if let Ok(entries) = fs::read_dir(out_dir) {
        for entry in entries.flatten() {
            let path = entry.path();
            let _ = if path.is_dir() {
                fs::remove_dir_all(&path)
            } else {
                fs::remove_file(&path)
            };
        }
    }
}

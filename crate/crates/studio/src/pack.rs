//! Template packs on disk.
//!
//! ```text
//! <pack>/pack.json       {"name", "version", "target_label",
//!                         "templates": {"<role>": {"path": "<pattern>", "file": "templates/..."}}}
//! <pack>/templates/...   template bodies
//! <pack>/static/...      copied verbatim; output path is the pack-relative path
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use studio_core::codegen::{PackError, Role, StaticFile, TemplatePack, TemplateSource};
use walkdir::WalkDir;

use crate::fsutil::rel_slash_path;

pub const PACK_FILE: &str = "pack.json";
pub const STATIC_DIR: &str = "static";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PackFile {
    name: String,
    version: u32,
    target_label: String,
    templates: BTreeMap<String, TemplateEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TemplateEntry {
    path: String,
    file: String,
}

#[derive(Debug, thiserror::Error)]
pub enum PackLoadError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },
    #[error("{}: {source}", path.display())]
    Pack { path: PathBuf, source: PackError },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> PackLoadError + '_ {
    move |source| PackLoadError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn format_err(path: &Path, message: impl Into<String>) -> PackLoadError {
    PackLoadError::Format {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

/// Loads and checks the pack rooted at `dir`. Template bodies are read as
/// UTF-8 with CRLF normalized to LF so output does not depend on checkout
/// settings; static files are taken byte for byte.
pub fn load_pack(dir: &Path) -> Result<TemplatePack, PackLoadError> {
    let manifest = dir.join(PACK_FILE);
    let text = fs::read_to_string(&manifest).map_err(io_err(&manifest))?;
    let spec: PackFile = serde_json::from_str(&text).map_err(|e| format_err(&manifest, e.to_string()))?;

    let mut templates = Vec::new();
    for (role, entry) in spec.templates {
        let role: Role = role.parse().map_err(|source| PackLoadError::Pack {
            path: manifest.clone(),
            source,
        })?;
        if !studio_core::codegen::is_safe_rel_path(&entry.file) {
            return Err(format_err(&manifest, format!("template file `{}` escapes the pack", entry.file)));
        }
        let path = dir.join(&entry.file);
        let body = fs::read_to_string(&path).map_err(io_err(&path))?;
        templates.push(TemplateSource {
            role,
            path_pattern: entry.path,
            body: body.replace("\r\n", "\n"),
        });
    }

    let mut static_files = Vec::new();
    let static_root = dir.join(STATIC_DIR);
    if static_root.is_dir() {
        for entry in WalkDir::new(&static_root).sort_by_file_name() {
            let entry = entry.map_err(|e| {
                let path = e.path().unwrap_or(&static_root).to_path_buf();
                PackLoadError::Io {
                    path,
                    source: e.into_io_error().unwrap_or_else(|| io::Error::other("directory loop")),
                }
            })?;
            if !entry.file_type().is_file() {
                continue;
            }
            let rel_path = rel_slash_path(dir, entry.path())
                .ok_or_else(|| format_err(entry.path(), "static file name is not UTF-8"))?;
            let bytes = fs::read(entry.path()).map_err(io_err(entry.path()))?;
            static_files.push(StaticFile { rel_path, bytes });
        }
    }

    TemplatePack::new(&spec.name, spec.version, spec.target_label, templates, static_files).map_err(|source| {
        PackLoadError::Pack {
            path: manifest.clone(),
            source,
        }
    })
}

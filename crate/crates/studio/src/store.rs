//! On-disk component catalog with reuse statistics.
//!
//! ```text
//! <root>/catalog/<id>/<version>.json   one descriptor per file
//! <root>/catalog/stats.json            id -> {placements, projects}
//! <root>/projects/<slug>.fui.xml       last recorded document per project
//! ```
//!
//! Recorded project documents are the source of truth for statistics:
//! `open` recounts them and `stats.json` is the committed aggregate.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use studio_core::catalog::{
    placement_counts, Catalog, CatalogError, ComponentDescriptor, ComponentDraft, ComponentLookup, RareComponent,
    ReuseDelta, ReuseStats, SearchQuery,
};
use studio_core::fui::{parse_fui, serialize_fui, validate_fui, FuiDocument, ValidationReport, FUI_EXTENSION};
use studio_core::Slug;

use crate::fsutil::write_atomic;

pub const CATALOG_DIR: &str = "catalog";
pub const PROJECTS_DIR: &str = "projects";
pub const STATS_FILE: &str = "stats.json";

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {message}", path.display())]
    Corrupt { path: PathBuf, message: String },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("document has {} validation error(s)", .0.error_count())]
    Invalid(ValidationReport),
}

impl StoreError {
    pub fn code(&self) -> &'static str {
        match self {
            StoreError::Io { .. } => "IO",
            StoreError::Corrupt { .. } => "CORRUPT_STORE",
            StoreError::Catalog(e) => e.code(),
            StoreError::Invalid(_) => "VALIDATION_FAILED",
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn corrupt(path: &Path, message: impl Into<String>) -> StoreError {
    StoreError::Corrupt {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

/// Canonical descriptor file content.
pub fn descriptor_json(d: &ComponentDescriptor) -> String {
    let mut text = serde_json::to_string_pretty(d).expect("descriptors always serialize");
    text.push('\n');
    text
}

pub fn stats_json(stats: &ReuseStats) -> String {
    let mut text = serde_json::to_string_pretty(stats).expect("stats always serialize");
    text.push('\n');
    text
}

#[derive(Debug)]
pub struct CatalogStore {
    root: PathBuf,
    catalog: Catalog,
    stats: ReuseStats,
    projects: BTreeMap<Slug, BTreeMap<Slug, u64>>,
}

impl CatalogStore {
    /// Creates an empty store, or opens `root` if it already is one.
    pub fn create(root: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let root = root.into();
        let catalog_dir = root.join(CATALOG_DIR);
        fs::create_dir_all(&catalog_dir).map_err(io_err(&catalog_dir))?;
        Self::open(root)
    }

    pub fn open(root: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let root = root.into();
        let catalog_dir = root.join(CATALOG_DIR);
        let mut descriptors: Vec<(PathBuf, ComponentDescriptor)> = Vec::new();
        for entry in fs::read_dir(&catalog_dir).map_err(io_err(&catalog_dir))? {
            let entry = entry.map_err(io_err(&catalog_dir))?;
            let dir = entry.path();
            if !entry.file_type().map_err(io_err(&dir))?.is_dir() {
                continue;
            }
            let id = entry
                .file_name()
                .to_str()
                .and_then(|n| Slug::new(n).ok())
                .ok_or_else(|| corrupt(&dir, "directory name is not a component id"))?;
            for file in fs::read_dir(&dir).map_err(io_err(&dir))? {
                let path = file.map_err(io_err(&dir))?.path();
                let Some(stem) = path.file_name().and_then(|n| n.to_str()).and_then(|n| n.strip_suffix(".json")) else {
                    continue;
                };
                if stem.starts_with('.') {
                    // Leftover temp file from an interrupted write.
                    continue;
                }
                let version: u32 = stem
                    .parse()
                    .map_err(|_| corrupt(&path, "file name is not a version number"))?;
                let text = fs::read_to_string(&path).map_err(io_err(&path))?;
                let d: ComponentDescriptor =
                    serde_json::from_str(&text).map_err(|e| corrupt(&path, e.to_string()))?;
                if d.id != id || d.version != version {
                    return Err(corrupt(&path, format!("holds {} v{}", d.id, d.version)));
                }
                descriptors.push((path, d));
            }
        }
        descriptors.sort_by(|(_, a), (_, b)| (&a.id, a.version).cmp(&(&b.id, b.version)));
        let mut catalog = Catalog::new();
        for (path, d) in descriptors {
            catalog.insert(d).map_err(|e| corrupt(&path, e.to_string()))?;
        }

        let mut projects = BTreeMap::new();
        let projects_dir = root.join(PROJECTS_DIR);
        match fs::read_dir(&projects_dir) {
            Ok(entries) => {
                for entry in entries {
                    let path = entry.map_err(io_err(&projects_dir))?.path();
                    let Some(slug) = path
                        .file_name()
                        .and_then(|n| n.to_str())
                        .and_then(|n| n.strip_suffix(FUI_EXTENSION))
                    else {
                        continue;
                    };
                    let slug = Slug::new(slug).map_err(|_| corrupt(&path, "file name is not a project slug"))?;
                    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
                    let doc = parse_fui(&text).map_err(|e| corrupt(&path, e.to_string()))?;
                    projects.insert(slug, placement_counts(&doc));
                }
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(io_err(&projects_dir)(e)),
        }
        let mut stats = ReuseStats::new();
        for counts in projects.values() {
            stats.replace_project(None, counts);
        }
        Ok(CatalogStore {
            root,
            catalog,
            stats,
            projects,
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    pub fn stats(&self) -> &ReuseStats {
        &self.stats
    }

    /// Projects with a recorded document, in slug order.
    pub fn recorded_projects(&self) -> impl Iterator<Item = &Slug> {
        self.projects.keys()
    }

    pub fn descriptor_path(&self, id: &str, version: u32) -> PathBuf {
        self.root.join(CATALOG_DIR).join(id).join(format!("{version}.json"))
    }

    pub fn stats_path(&self) -> PathBuf {
        self.root.join(CATALOG_DIR).join(STATS_FILE)
    }

    pub fn project_path(&self, project: &str) -> PathBuf {
        self.root.join(PROJECTS_DIR).join(format!("{project}{FUI_EXTENSION}"))
    }

    /// Persists `draft` as the next version of its id and returns that
    /// version. The descriptor file is written before the in-memory index
    /// changes, so a failed write leaves the store as it was.
    pub fn register(&mut self, draft: ComponentDraft) -> Result<u32, StoreError> {
        let descriptor = self.catalog.next_descriptor(draft)?;
        let path = self.descriptor_path(&descriptor.id, descriptor.version);
        write_atomic(&path, descriptor_json(&descriptor).as_bytes()).map_err(io_err(&path))?;
        let version = descriptor.version;
        self.catalog.insert(descriptor)?;
        Ok(version)
    }

    pub fn search(&self, query: &SearchQuery) -> Vec<&ComponentDescriptor> {
        self.catalog.search(query)
    }

    /// Replaces `project`'s contribution to the statistics with `doc`'s
    /// placements. Invalid documents are refused without touching anything.
    pub fn record_reuse(&mut self, project: &Slug, doc: &FuiDocument) -> Result<ReuseDelta, StoreError> {
        let report = validate_fui(doc, &self.catalog);
        if !report.is_valid() {
            return Err(StoreError::Invalid(report));
        }
        let counts = placement_counts(doc);
        let mut stats = self.stats.clone();
        let delta = stats.replace_project(self.projects.get(project), &counts);

        let text = serialize_fui(doc).map_err(|e| corrupt(&self.project_path(project), e.to_string()))?;
        let project_path = self.project_path(project);
        write_atomic(&project_path, text.as_bytes()).map_err(io_err(&project_path))?;
        let stats_path = self.stats_path();
        write_atomic(&stats_path, stats_json(&stats).as_bytes()).map_err(io_err(&stats_path))?;

        self.stats = stats;
        self.projects.insert(project.clone(), counts);
        Ok(delta)
    }

    /// Components placed at most `threshold` times, fewest first.
    pub fn rarely_used_report(&self, threshold: u64) -> Vec<RareComponent> {
        self.stats.rarely_used(self.catalog.ids(), threshold)
    }
}

impl ComponentLookup for CatalogStore {
    fn component(&self, id: &str) -> Option<&ComponentDescriptor> {
        self.catalog.head(id)
    }
}

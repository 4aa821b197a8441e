//! The shipped HR Portal fixture set and the golden-output check.
//!
//! ```text
//! fixtures/catalog/...            store root holding the reference catalog
//! fixtures/hr-portal.fui.xml      the HR Portal design
//! fixtures/pack-reference/...     reference template pack
//! fixtures/golden/                frozen output tree, manifest.json included
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use studio_core::catalog::Catalog;
use studio_core::codegen::{sha256_hex, Manifest, ManifestEntry, MANIFEST_FILE};
use studio_core::fui::{parse_fui, validate_fui, FuiDocument};
use studio_core::{GenerationResult, TemplatePack};

use crate::pack::load_pack;
use crate::store::CatalogStore;

pub const FUI_FIXTURE: &str = "hr-portal.fui.xml";
pub const PACK_DIR: &str = "pack-reference";
pub const GOLDEN_DIR: &str = "golden";

/// Artifact sources built from invented fixture data; golden checks only
/// require them to be present.
pub const PRESENCE_ONLY_SOURCES: &[&str] = &["entity:Cand_Int_Results"];

/// Directory holding the fixtures shipped with this crate.
pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

#[derive(Debug, thiserror::Error)]
#[error("fixture {}: {message}", file.display())]
pub struct FixtureError {
    pub file: PathBuf,
    pub message: String,
}

fn fixture_err(file: &Path, message: impl fmt::Display) -> FixtureError {
    FixtureError {
        file: file.to_path_buf(),
        message: message.to_string(),
    }
}

#[derive(Debug, Clone)]
pub struct FixtureSet {
    pub root: PathBuf,
    pub catalog: Catalog,
    pub fui_text: String,
    pub doc: FuiDocument,
    pub pack: TemplatePack,
    pub golden: Manifest,
}

/// Loads the fixture set under `root`; every part must parse and the
/// design must validate against the catalog with zero errors.
pub fn load_fixtures(root: &Path) -> Result<FixtureSet, FixtureError> {
    let catalog_dir = root.join("catalog");
    let store = CatalogStore::open(root).map_err(|e| fixture_err(&catalog_dir, e))?;
    let catalog = store.catalog().clone();

    let fui_path = root.join(FUI_FIXTURE);
    let fui_text = fs::read_to_string(&fui_path).map_err(|e| fixture_err(&fui_path, e))?;
    let doc = parse_fui(&fui_text).map_err(|e| fixture_err(&fui_path, e))?;
    let report = validate_fui(&doc, &catalog);
    if let Some(first) = report.errors().next() {
        return Err(fixture_err(&fui_path, format!("does not validate: {first}")));
    }

    let pack_dir = root.join(PACK_DIR);
    let pack = load_pack(&pack_dir).map_err(|e| fixture_err(&pack_dir, e))?;

    let golden_path = root.join(GOLDEN_DIR).join(MANIFEST_FILE);
    let golden_text = fs::read_to_string(&golden_path).map_err(|e| fixture_err(&golden_path, e))?;
    let golden = Manifest::from_json(&golden_text).map_err(|e| fixture_err(&golden_path, e))?;

    Ok(FixtureSet {
        root: root.to_path_buf(),
        catalog,
        fui_text,
        doc,
        pack,
        golden,
    })
}

impl FixtureSet {
    pub fn golden_dir(&self) -> PathBuf {
        self.root.join(GOLDEN_DIR)
    }

    pub fn check_golden(&self, result: &GenerationResult) -> GoldenReport {
        check_golden(result, &self.golden, &self.golden_dir())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GoldenFailure {
    PackMismatch { expected: String, actual: String },
    Missing(String),
    Unexpected(String),
    Differs {
        path: String,
        expected: Box<ManifestEntry>,
        actual: Box<ManifestEntry>,
        /// First differing line (1-based) with both sides, when the golden
        /// copy of the file is available.
        first_difference: Option<(usize, String, String)>,
    },
}

impl fmt::Display for GoldenFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GoldenFailure::PackMismatch { expected, actual } => {
                write!(f, "pack/project: expected {expected}, got {actual}")
            }
            GoldenFailure::Missing(p) => write!(f, "{p}: missing"),
            GoldenFailure::Unexpected(p) => write!(f, "{p}: unexpected artifact"),
            GoldenFailure::Differs {
                path,
                expected,
                actual,
                first_difference,
            } => {
                write!(
                    f,
                    "{path}: expected {} bytes sha256 {}, got {} bytes sha256 {}",
                    expected.bytes, expected.sha256, actual.bytes, actual.sha256
                )?;
                if expected.role != actual.role || expected.source != actual.source {
                    write!(
                        f,
                        " (role/source {}/{} vs {}/{})",
                        expected.role, expected.source, actual.role, actual.source
                    )?;
                }
                if let Some((line, want, got)) = first_difference {
                    write!(f, "\n  line {line}:\n  - {want}\n  + {got}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GoldenReport {
    pub failures: Vec<GoldenFailure>,
}

impl GoldenReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for GoldenReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return f.write_str("golden check passed");
        }
        writeln!(f, "golden check failed ({} difference(s)):", self.failures.len())?;
        for failure in &self.failures {
            writeln!(f, "{failure}")?;
        }
        Ok(())
    }
}

fn first_difference(expected: &[u8], actual: &[u8]) -> Option<(usize, String, String)> {
    let expected = String::from_utf8_lossy(expected);
    let actual = String::from_utf8_lossy(actual);
    let mut want = expected.split('\n');
    let mut got = actual.split('\n');
    for line in 1.. {
        match (want.next(), got.next()) {
            (None, None) => return None,
            (w, g) if w != g => {
                return Some((line, w.unwrap_or("<end of file>").into(), g.unwrap_or("<end of file>").into()))
            }
            _ => {}
        }
    }
    None
}

/// Compares `result` with a golden manifest. Every golden path must be
/// produced byte-identically, except presence-only sources, and no other
/// path may appear. `golden_dir` may hold copies of the golden files, used
/// to point at the first differing line.
pub fn check_golden(result: &GenerationResult, golden: &Manifest, golden_dir: &Path) -> GoldenReport {
    let mut report = GoldenReport::default();
    let actual = &result.manifest;
    if (&actual.pack, &actual.project) != (&golden.pack, &golden.project) {
        report.failures.push(GoldenFailure::PackMismatch {
            expected: format!("{} v{} for {}", golden.pack.name, golden.pack.version, golden.project),
            actual: format!("{} v{} for {}", actual.pack.name, actual.pack.version, actual.project),
        });
    }
    let produced: BTreeMap<&str, &ManifestEntry> = actual.artifacts.iter().map(|e| (e.path.as_str(), e)).collect();
    let expected: BTreeMap<&str, &ManifestEntry> = golden.artifacts.iter().map(|e| (e.path.as_str(), e)).collect();

    for (path, want) in &expected {
        let Some(got) = produced.get(path) else {
            report.failures.push(GoldenFailure::Missing(path.to_string()));
            continue;
        };
        if PRESENCE_ONLY_SOURCES.contains(&want.source.as_str()) && want.source == got.source {
            continue;
        }
        if want != got {
            let first_difference = fs::read(golden_dir.join(path)).ok().and_then(|golden_bytes| {
                if sha256_hex(&golden_bytes) != want.sha256 {
                    return None;
                }
                let bytes = &result.artifact(path)?.bytes;
                first_difference(&golden_bytes, bytes)
            });
            report.failures.push(GoldenFailure::Differs {
                path: path.to_string(),
                expected: Box::new((*want).clone()),
                actual: Box::new((*got).clone()),
                first_difference,
            });
        }
    }
    for path in produced.keys() {
        if !expected.contains_key(path) {
            report.failures.push(GoldenFailure::Unexpected(path.to_string()));
        }
    }
    report
}

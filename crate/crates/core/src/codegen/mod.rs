//! Model-to-text generation: a FUI document rendered through a template pack
//! into an ordered, digest-listed artifact tree.

mod context;
mod manifest;
mod schema;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::catalog::ComponentLookup;
use crate::fui::{validate_fui, FuiDocument, ValidationReport};
use crate::names::{Ident, Slug};
use crate::template::{self, RenderError, Template, TemplateError, Value};

pub use context::{html_escape, string_literal_escape};
pub use manifest::{sha256_hex, Manifest, ManifestEntry, PackRef};
pub use schema::{emit_schema, sql_type, SchemaError, SCHEMA_HEADER};

/// What an artifact is for. Declaration order is the artifact ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// One per screen.
    View,
    /// One per screen with at least one action-bearing placement.
    Handler,
    DaoBase,
    /// One per entity binding.
    DaoEntity,
    Schema,
    Index,
    /// Copied verbatim from the pack; never a template role.
    Static,
}

impl Role {
    pub const TEMPLATE_ROLES: [Role; 6] = [
        Role::View,
        Role::Handler,
        Role::DaoBase,
        Role::DaoEntity,
        Role::Schema,
        Role::Index,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Role::View => "view",
            Role::Handler => "handler",
            Role::DaoBase => "dao_base",
            Role::DaoEntity => "dao_entity",
            Role::Schema => "schema",
            Role::Index => "index",
            Role::Static => "static",
        }
    }

    /// Placeholders a path pattern for this role may use.
    fn placeholders(self) -> &'static [&'static str] {
        match self {
            Role::View | Role::Handler => &["screen_id", "project"],
            Role::DaoEntity => &["entity_name", "project"],
            _ => &["project"],
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Role {
    type Err = PackError;

    fn from_str(s: &str) -> Result<Self, PackError> {
        Role::TEMPLATE_ROLES
            .into_iter()
            .chain([Role::Static])
            .find(|r| r.as_str() == s)
            .ok_or_else(|| PackError::UnknownRole(s.into()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PackError {
    #[error("`{0}` is not a template role")]
    UnknownRole(String),
    #[error("role `{0}` has more than one template")]
    DuplicateRole(Role),
    #[error("path pattern `{pattern}`: {message}")]
    BadPattern { pattern: String, message: String },
    #[error("template for role `{role}`: {source}")]
    Template { role: Role, source: TemplateError },
    #[error("static file path `{0}` is not a safe relative path")]
    BadStaticPath(String),
    #[error("static file `{0}` is listed twice")]
    DuplicateStatic(String),
    #[error("pack name `{0}` is not a slug")]
    BadName(String),
}

/// A relative output path: `/`-separated, no empty, `.` or `..` segments,
/// no backslashes or drive prefixes, and not the reserved `manifest.json`.
pub fn is_safe_rel_path(path: &str) -> bool {
    !path.is_empty()
        && path != MANIFEST_FILE
        && !path.contains('\\')
        && !path.contains(':')
        && !path.contains('\0')
        && path.split('/').all(|seg| !seg.is_empty() && seg != "." && seg != "..")
}

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq)]
enum PatternPart {
    Lit(String),
    Var(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathPattern {
    source: String,
    parts: Vec<PatternPart>,
}

impl PathPattern {
    fn parse(pattern: &str, role: Role) -> Result<Self, PackError> {
        let bad = |message: String| PackError::BadPattern {
            pattern: pattern.into(),
            message,
        };
        let mut parts = Vec::new();
        let mut rest = pattern;
        while let Some(open) = rest.find(['{', '}']) {
            if rest.as_bytes()[open] == b'}' {
                return Err(bad("unmatched `}`".into()));
            }
            if open > 0 {
                parts.push(PatternPart::Lit(rest[..open].into()));
            }
            let close = rest[open..].find('}').ok_or_else(|| bad("unclosed `{`".into()))? + open;
            let name = &rest[open + 1..close];
            let var = role
                .placeholders()
                .iter()
                .find(|p| **p == name)
                .ok_or_else(|| bad(format!("placeholder `{{{name}}}` is not available for role `{role}`")))?;
            parts.push(PatternPart::Var(var));
            rest = &rest[close + 1..];
        }
        if !rest.is_empty() {
            parts.push(PatternPart::Lit(rest.into()));
        }
        // Substitute slug-shaped sample values to check path shape.
        let sample = Self {
            source: pattern.into(),
            parts,
        };
        if !is_safe_rel_path(&sample.expand(&[("screen_id", "s"), ("entity_name", "e"), ("project", "p")])) {
            return Err(bad("does not expand to a safe relative path".into()));
        }
        Ok(sample)
    }

    fn expand(&self, vars: &[(&str, &str)]) -> String {
        let mut out = String::new();
        for part in &self.parts {
            match part {
                PatternPart::Lit(s) => out.push_str(s),
                PatternPart::Var(name) => {
                    let value = vars.iter().find(|(k, _)| k == name).map_or("", |(_, v)| *v);
                    out.push_str(value);
                }
            }
        }
        out
    }

    pub fn as_str(&self) -> &str {
        &self.source
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackTemplate {
    pub role: Role,
    pub path_pattern: PathPattern,
    pub body: String,
    ast: Template,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticFile {
    pub rel_path: String,
    pub bytes: Vec<u8>,
}

/// A named, versioned generation target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplatePack {
    pub name: Slug,
    pub version: u32,
    pub target_label: String,
    templates: Vec<PackTemplate>,
    static_files: Vec<StaticFile>,
}

/// Unchecked template source: role, path pattern and body text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateSource {
    pub role: Role,
    pub path_pattern: String,
    pub body: String,
}

impl TemplatePack {
    /// Parses every template and checks role, placeholder and path rules.
    /// Templates end up ordered by role, static files by path.
    pub fn new(
        name: &str,
        version: u32,
        target_label: impl Into<String>,
        templates: impl IntoIterator<Item = TemplateSource>,
        static_files: impl IntoIterator<Item = StaticFile>,
    ) -> Result<Self, PackError> {
        let name = Slug::new(name).map_err(|_| PackError::BadName(name.into()))?;
        let mut parsed: Vec<PackTemplate> = Vec::new();
        for src in templates {
            if src.role == Role::Static {
                return Err(PackError::UnknownRole("static".into()));
            }
            if parsed.iter().any(|t| t.role == src.role) {
                return Err(PackError::DuplicateRole(src.role));
            }
            let path_pattern = PathPattern::parse(&src.path_pattern, src.role)?;
            let ast = template::parse_template(&src.body).map_err(|source| PackError::Template {
                role: src.role,
                source,
            })?;
            parsed.push(PackTemplate {
                role: src.role,
                path_pattern,
                body: src.body,
                ast,
            });
        }
        parsed.sort_by_key(|t| t.role);

        let mut statics: Vec<StaticFile> = static_files.into_iter().collect();
        for f in &statics {
            if !is_safe_rel_path(&f.rel_path) {
                return Err(PackError::BadStaticPath(f.rel_path.clone()));
            }
        }
        statics.sort_by(|a, b| a.rel_path.cmp(&b.rel_path));
        if let Some(w) = statics.windows(2).find(|w| w[0].rel_path == w[1].rel_path) {
            return Err(PackError::DuplicateStatic(w[0].rel_path.clone()));
        }
        Ok(TemplatePack {
            name,
            version,
            target_label: target_label.into(),
            templates: parsed,
            static_files: statics,
        })
    }

    pub fn templates(&self) -> &[PackTemplate] {
        &self.templates
    }

    pub fn static_files(&self) -> &[StaticFile] {
        &self.static_files
    }

    pub fn template(&self, role: Role) -> Option<&PackTemplate> {
        self.templates.iter().find(|t| t.role == role)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "id", rename_all = "snake_case")]
pub enum Source {
    Screen(Slug),
    Entity(Ident),
    Project,
    Static,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Screen(s) => write!(f, "screen:{s}"),
            Source::Entity(e) => write!(f, "entity:{e}"),
            Source::Project => f.write_str("project"),
            Source::Static => f.write_str("static"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub role: Role,
    pub source: Source,
    /// Placements that contributed to the artifact.
    pub instances: Vec<Slug>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedArtifact {
    pub rel_path: String,
    pub bytes: Vec<u8>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationResult {
    /// Role-major, then path ascending.
    pub artifacts: Vec<GeneratedArtifact>,
    pub manifest: Manifest,
}

impl GenerationResult {
    pub fn manifest_json(&self) -> String {
        self.manifest.to_canonical_json()
    }

    pub fn artifact(&self, rel_path: &str) -> Option<&GeneratedArtifact> {
        self.artifacts.iter().find(|a| a.rel_path == rel_path)
    }

    pub fn count(&self, role: Role) -> usize {
        self.artifacts.iter().filter(|a| a.provenance.role == role).count()
    }

    /// Checks the result invariants: unique safe paths, ordering, and
    /// manifest entries matching the artifact bytes.
    pub fn check(&self) -> Result<(), String> {
        if self.manifest.artifacts.len() != self.artifacts.len() {
            return Err("manifest and artifact counts differ".into());
        }
        let mut paths = BTreeSet::new();
        for (a, e) in self.artifacts.iter().zip(&self.manifest.artifacts) {
            if !is_safe_rel_path(&a.rel_path) {
                return Err(format!("unsafe path `{}`", a.rel_path));
            }
            if !paths.insert(a.rel_path.as_str()) {
                return Err(format!("duplicate path `{}`", a.rel_path));
            }
            if e.path != a.rel_path
                || e.bytes != a.bytes.len() as u64
                || e.sha256 != sha256_hex(&a.bytes)
                || e.role != a.provenance.role
            {
                return Err(format!("manifest entry for `{}` does not match", a.rel_path));
            }
        }
        let ordered = self.artifacts.windows(2).all(|w| {
            (w[0].provenance.role, w[0].rel_path.as_str()) < (w[1].provenance.role, w[1].rel_path.as_str())
        });
        if !ordered {
            return Err("artifacts are not ordered role-major then by path".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenerateError {
    #[error("document has {} validation error(s)", .0.error_count())]
    Invalid(ValidationReport),
    #[error("rendering `{path}` ({role} template): {source}")]
    Render {
        path: String,
        role: Role,
        source: RenderError,
    },
    #[error("generated path `{path}` is produced twice ({first} and {second})")]
    PathCollision { path: String, first: Role, second: Role },
    #[error("generated path `{0}` collides with a static file")]
    StaticCollision(String),
    #[error("generated path `{0}` is not a safe relative path")]
    UnsafePath(String),
    #[error(transparent)]
    Schema(#[from] SchemaError),
}

impl GenerateError {
    pub fn code(&self) -> &'static str {
        match self {
            GenerateError::Invalid(_) => "VALIDATION_FAILED",
            GenerateError::Render { source, .. } => source.code(),
            GenerateError::PathCollision { .. } | GenerateError::StaticCollision(_) => "PATH_COLLISION",
            GenerateError::UnsafePath(_) => "UNSAFE_PATH",
            GenerateError::Schema(_) => "SCHEMA",
        }
    }
}

/// Generates the artifact tree for `doc`.
///
/// Refuses documents with validation errors. Output is a pure function of
/// the inputs: no clock, environment or filesystem access.
pub fn generate(
    doc: &FuiDocument,
    pack: &TemplatePack,
    catalog: &impl ComponentLookup,
) -> Result<GenerationResult, GenerateError> {
    let report = validate_fui(doc, catalog);
    if !report.is_valid() {
        return Err(GenerateError::Invalid(report));
    }
    let ctx = context::build(doc, catalog, &pack.name, pack.version, &pack.target_label);
    let project = doc.project.as_str();
    let mut artifacts: Vec<GeneratedArtifact> = Vec::new();

    let mut emit = |t: &PackTemplate, vars: &[(&str, &str)], extra: Option<(&str, Value)>, provenance: Provenance| {
        let path = t.path_pattern.expand(vars);
        if !is_safe_rel_path(&path) {
            return Err(GenerateError::UnsafePath(path));
        }
        let mut local = ctx.root.clone();
        if let Some((key, value)) = extra {
            local.insert(key, value);
        }
        let text = template::render(&t.ast, &local).map_err(|source| GenerateError::Render {
            path: path.clone(),
            role: t.role,
            source,
        })?;
        artifacts.push(GeneratedArtifact {
            rel_path: path,
            bytes: text.into_bytes(),
            provenance,
        });
        Ok(())
    };

    for t in pack.templates() {
        match t.role {
            Role::View | Role::Handler => {
                for screen in &doc.screens {
                    let instances: Vec<Slug> = screen
                        .components
                        .iter()
                        .filter(|p| t.role == Role::View || p.action.is_some())
                        .map(|p| p.instance_id.clone())
                        .collect();
                    if t.role == Role::Handler && instances.is_empty() {
                        continue;
                    }
                    let value = ctx.screens[screen.id.as_str()].clone();
                    emit(
                        t,
                        &[("screen_id", &screen.id), ("project", project)],
                        Some(("screen", value)),
                        Provenance {
                            role: t.role,
                            source: Source::Screen(screen.id.clone()),
                            instances,
                        },
                    )?;
                }
            }
            Role::DaoEntity => {
                for b in &doc.bindings {
                    let value = ctx.entities[b.entity_name.as_str()].clone();
                    emit(
                        t,
                        &[("entity_name", &b.entity_name), ("project", project)],
                        Some(("entity", value)),
                        Provenance {
                            role: t.role,
                            source: Source::Entity(b.entity_name.clone()),
                            instances: b.field_maps.iter().map(|m| m.instance_id.clone()).collect(),
                        },
                    )?;
                }
            }
            Role::Schema => {
                let ddl = emit_schema(&doc.bindings)?;
                emit(
                    t,
                    &[("project", project)],
                    Some(("ddl", Value::Str(ddl))),
                    Provenance {
                        role: t.role,
                        source: Source::Project,
                        instances: Vec::new(),
                    },
                )?;
            }
            Role::DaoBase | Role::Index => {
                emit(
                    t,
                    &[("project", project)],
                    None,
                    Provenance {
                        role: t.role,
                        source: Source::Project,
                        instances: Vec::new(),
                    },
                )?;
            }
            Role::Static => unreachable!("packs never hold static templates"),
        }
    }

    artifacts.sort_by(|a, b| {
        (a.provenance.role, a.rel_path.as_str()).cmp(&(b.provenance.role, b.rel_path.as_str()))
    });
    let mut generated: BTreeMap<&str, Role> = BTreeMap::new();
    for a in &artifacts {
        if let Some(first) = generated.insert(&a.rel_path, a.provenance.role) {
            return Err(GenerateError::PathCollision {
                path: a.rel_path.clone(),
                first,
                second: a.provenance.role,
            });
        }
    }
    for f in pack.static_files() {
        if generated.contains_key(f.rel_path.as_str()) {
            return Err(GenerateError::StaticCollision(f.rel_path.clone()));
        }
    }
    artifacts.extend(pack.static_files().iter().map(|f| GeneratedArtifact {
        rel_path: f.rel_path.clone(),
        bytes: f.bytes.clone(),
        provenance: Provenance {
            role: Role::Static,
            source: Source::Static,
            instances: Vec::new(),
        },
    }));

    let manifest = Manifest {
        artifacts: artifacts
            .iter()
            .map(|a| ManifestEntry {
                bytes: a.bytes.len() as u64,
                path: a.rel_path.clone(),
                role: a.provenance.role,
                sha256: sha256_hex(&a.bytes),
                source: format!("{}", a.provenance.source),
            })
            .collect(),
        pack: PackRef {
            name: String::from(pack.name.as_str()),
            version: pack.version,
        },
        project: project.into(),
    };
    Ok(GenerationResult { artifacts, manifest })
}

//! Versioned component descriptors, the three-way reuse taxonomy and
//! catalog search.
//!
//! [`Catalog`] is the in-memory index; persistence is layered on top of it by
//! the `studio` crate, which computes the next descriptor with
//! [`Catalog::next_descriptor`], writes it, then commits it with
//! [`Catalog::insert`].

mod reuse;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::names::Slug;

pub use reuse::{placement_counts, RareComponent, ReuseDelta, ReuseStats, Usage, UsageDelta};

/// Where a component sits in the domain-engineering taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    /// Horizontal reuse: useful across application domains.
    GeneralPurpose,
    /// Vertical reuse: useful across applications of one domain.
    DomainSpecific,
    /// Built for a single application.
    ProductSpecific,
}

impl Category {
    pub const ALL: [Category; 3] = [
        Category::GeneralPurpose,
        Category::DomainSpecific,
        Category::ProductSpecific,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::GeneralPurpose => "general_purpose",
            Category::DomainSpecific => "domain_specific",
            Category::ProductSpecific => "product_specific",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Category {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, CatalogError> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| CatalogError::Invalid(alloc::format!("unknown category `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropType {
    String,
    Int,
    Bool,
    Enum(Vec<String>),
}

impl PropType {
    /// Whether `value` (always carried as text in the FUI) fits this type.
    pub fn accepts(&self, value: &str) -> bool {
        match self {
            PropType::String => true,
            PropType::Int => value.parse::<i64>().is_ok(),
            PropType::Bool => value == "true" || value == "false",
            PropType::Enum(values) => values.iter().any(|v| v == value),
        }
    }

    fn label(&self) -> &'static str {
        match self {
            PropType::String => "string",
            PropType::Int => "int",
            PropType::Bool => "bool",
            PropType::Enum(_) => "enum",
        }
    }
}

/// One configurable property of a component.
///
/// On disk: `{"name": "style", "type": "enum", "values": ["flat", "raised"], "default": "flat"}`;
/// `values` only appears for enums and `default` only when set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPropSpec", into = "RawPropSpec")]
pub struct PropSpec {
    pub name: String,
    pub ty: PropType,
    pub default: Option<String>,
}

impl PropSpec {
    pub fn new(name: impl Into<String>, ty: PropType) -> Self {
        PropSpec {
            name: name.into(),
            ty,
            default: None,
        }
    }

    pub fn with_default(mut self, default: impl Into<String>) -> Self {
        self.default = Some(default.into());
        self
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPropSpec {
    name: String,
    #[serde(rename = "type")]
    ty: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    default: Option<String>,
}

impl TryFrom<RawPropSpec> for PropSpec {
    type Error = String;

    fn try_from(raw: RawPropSpec) -> Result<Self, String> {
        let ty = match (raw.ty.as_str(), raw.values) {
            ("string", None) => PropType::String,
            ("int", None) => PropType::Int,
            ("bool", None) => PropType::Bool,
            ("enum", Some(values)) => PropType::Enum(values),
            ("enum", None) => return Err(alloc::format!("enum prop `{}` needs `values`", raw.name)),
            (other, Some(_)) => {
                return Err(alloc::format!("`values` is only valid for enum props, not `{other}`"))
            }
            (other, None) => return Err(alloc::format!("unknown prop type `{other}`")),
        };
        Ok(PropSpec {
            name: raw.name,
            ty,
            default: raw.default,
        })
    }
}

impl From<PropSpec> for RawPropSpec {
    fn from(spec: PropSpec) -> Self {
        let ty = String::from(spec.ty.label());
        let values = match spec.ty {
            PropType::Enum(values) => Some(values),
            _ => None,
        };
        RawPropSpec {
            name: spec.name,
            ty,
            values,
            default: spec.default,
        }
    }
}

/// A descriptor as submitted for registration, before a version is assigned.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDraft {
    pub id: Slug,
    pub name: String,
    pub category: Category,
    #[serde(default)]
    pub domain_tags: BTreeSet<Slug>,
    #[serde(default)]
    pub prop_schema: Vec<PropSpec>,
    #[serde(default)]
    pub template_hooks: Vec<Slug>,
}

/// A catalog entry. Field order is the on-disk key order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDescriptor {
    pub id: Slug,
    pub name: String,
    pub category: Category,
    pub domain_tags: BTreeSet<Slug>,
    pub prop_schema: Vec<PropSpec>,
    pub template_hooks: Vec<Slug>,
    pub version: u32,
}

impl ComponentDraft {
    pub fn with_version(self, version: u32) -> ComponentDescriptor {
        ComponentDescriptor {
            id: self.id,
            name: self.name,
            category: self.category,
            domain_tags: self.domain_tags,
            prop_schema: self.prop_schema,
            template_hooks: self.template_hooks,
            version,
        }
    }

    /// Checks category/tag, prop-schema and default-value invariants.
    pub fn check(&self) -> Result<(), CatalogError> {
        let bad = |msg: String| Err(CatalogError::Invalid(msg));
        if self.name.trim().is_empty() {
            return bad(alloc::format!("component `{}` has an empty name", self.id));
        }
        if self.category == Category::DomainSpecific && self.domain_tags.is_empty() {
            return bad(alloc::format!(
                "domain_specific component `{}` must name at least one domain tag",
                self.id
            ));
        }
        let mut seen = BTreeSet::new();
        for prop in &self.prop_schema {
            if prop.name.is_empty() {
                return bad(alloc::format!("component `{}` has an unnamed prop", self.id));
            }
            if !seen.insert(prop.name.as_str()) {
                return bad(alloc::format!(
                    "component `{}` declares prop `{}` twice",
                    self.id,
                    prop.name
                ));
            }
            if let PropType::Enum(values) = &prop.ty {
                if values.is_empty() {
                    return bad(alloc::format!(
                        "enum prop `{}.{}` has no values",
                        self.id,
                        prop.name
                    ));
                }
            }
            if let Some(default) = &prop.default {
                if !prop.ty.accepts(default) {
                    return bad(alloc::format!(
                        "default `{}` for prop `{}.{}` is not a valid {}",
                        default,
                        self.id,
                        prop.name,
                        prop.ty.label()
                    ));
                }
            }
        }
        Ok(())
    }
}

impl ComponentDescriptor {
    pub fn draft(&self) -> ComponentDraft {
        ComponentDraft {
            id: self.id.clone(),
            name: self.name.clone(),
            category: self.category,
            domain_tags: self.domain_tags.clone(),
            prop_schema: self.prop_schema.clone(),
            template_hooks: self.template_hooks.clone(),
        }
    }

    pub fn prop(&self, name: &str) -> Option<&PropSpec> {
        self.prop_schema.iter().find(|p| p.name == name)
    }

    pub fn has_hook(&self, hook: &str) -> bool {
        self.template_hooks.iter().any(|h| h.as_str() == hook)
    }

    /// Components carrying the `input` hook can back an entity column.
    pub fn is_input(&self) -> bool {
        self.has_hook(INPUT_HOOK)
    }
}

pub const INPUT_HOOK: &str = "input";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("invalid descriptor: {0}")]
    Invalid(String),
    #[error("descriptor for `{0}` is identical to its current head version")]
    NoChange(Slug),
    #[error("version {found} of `{id}` is out of sequence (expected {expected})")]
    VersionGap { id: Slug, expected: u32, found: u32 },
}

impl CatalogError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            CatalogError::Invalid(_) => "VALIDATION",
            CatalogError::NoChange(_) => "NO_CHANGE",
            CatalogError::VersionGap { .. } => "VERSION_GAP",
        }
    }
}

/// Read access to component head versions; what validation and generation
/// need from a catalog.
pub trait ComponentLookup {
    fn component(&self, id: &str) -> Option<&ComponentDescriptor>;
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchQuery {
    /// Case-insensitive substring of id or name.
    pub text: Option<String>,
    pub category: Option<Category>,
    pub domain_tag: Option<String>,
}

impl SearchQuery {
    pub fn matches(&self, d: &ComponentDescriptor) -> bool {
        if let Some(text) = &self.text {
            let needle = text.to_lowercase();
            if !d.id.to_lowercase().contains(&needle) && !d.name.to_lowercase().contains(&needle) {
                return false;
            }
        }
        if let Some(category) = self.category {
            if d.category != category {
                return false;
            }
        }
        if let Some(tag) = &self.domain_tag {
            if !d.domain_tags.iter().any(|t| t.as_str() == tag) {
                return false;
            }
        }
        true
    }
}

/// In-memory versioned descriptor index keyed by component id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Catalog {
    entries: BTreeMap<Slug, Vec<ComponentDescriptor>>,
}

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a catalog registering each draft in order.
    pub fn from_drafts(drafts: impl IntoIterator<Item = ComponentDraft>) -> Result<Self, CatalogError> {
        let mut catalog = Catalog::new();
        for draft in drafts {
            catalog.register(draft)?;
        }
        Ok(catalog)
    }

    /// Computes the descriptor that registering `draft` would commit,
    /// without changing the catalog.
    pub fn next_descriptor(&self, draft: ComponentDraft) -> Result<ComponentDescriptor, CatalogError> {
        draft.check()?;
        let version = match self.head(&draft.id) {
            Some(head) if head.draft() == draft => return Err(CatalogError::NoChange(draft.id)),
            Some(head) => head.version + 1,
            None => 1,
        };
        Ok(draft.with_version(version))
    }

    /// Commits a descriptor whose version must directly follow the current head.
    pub fn insert(&mut self, descriptor: ComponentDescriptor) -> Result<(), CatalogError> {
        descriptor.draft().check()?;
        let versions = self.entries.entry(descriptor.id.clone()).or_default();
        let expected = versions.len() as u32 + 1;
        if descriptor.version != expected {
            let err = CatalogError::VersionGap {
                id: descriptor.id.clone(),
                expected,
                found: descriptor.version,
            };
            if versions.is_empty() {
                self.entries.remove(&descriptor.id);
            }
            return Err(err);
        }
        versions.push(descriptor);
        Ok(())
    }

    pub fn register(&mut self, draft: ComponentDraft) -> Result<u32, CatalogError> {
        let descriptor = self.next_descriptor(draft)?;
        let version = descriptor.version;
        self.insert(descriptor)?;
        Ok(version)
    }

    pub fn head(&self, id: &str) -> Option<&ComponentDescriptor> {
        self.entries.get(id).and_then(|v| v.last())
    }

    pub fn get(&self, id: &str, version: u32) -> Option<&ComponentDescriptor> {
        let idx = usize::try_from(version).ok()?.checked_sub(1)?;
        self.entries.get(id)?.get(idx)
    }

    /// All versions of `id`, oldest first.
    pub fn versions(&self, id: &str) -> &[ComponentDescriptor] {
        self.entries.get(id).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn ids(&self) -> impl Iterator<Item = &Slug> {
        self.entries.keys()
    }

    /// Head descriptors ordered by id.
    pub fn heads(&self) -> impl Iterator<Item = &ComponentDescriptor> {
        self.entries.values().filter_map(|v| v.last())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Head descriptors matching every supplied filter, ordered by id.
    pub fn search(&self, query: &SearchQuery) -> Vec<&ComponentDescriptor> {
        self.heads().filter(|d| query.matches(d)).collect()
    }
}

impl ComponentLookup for Catalog {
    fn component(&self, id: &str) -> Option<&ComponentDescriptor> {
        self.head(id)
    }
}

impl<T: ComponentLookup + ?Sized> ComponentLookup for &T {
    fn component(&self, id: &str) -> Option<&ComponentDescriptor> {
        (**self).component(id)
    }
}

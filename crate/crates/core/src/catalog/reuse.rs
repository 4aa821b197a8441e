//! Reuse-frequency statistics: how often each component is placed and in how
//! many projects, with per-project replacement semantics.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::fui::FuiDocument;
use crate::names::Slug;

/// Placements per component ref in one document.
pub fn placement_counts(doc: &FuiDocument) -> BTreeMap<Slug, u64> {
    let mut counts = BTreeMap::new();
    for (_, p) in doc.placements() {
        *counts.entry(p.component_ref.clone()).or_insert(0) += 1;
    }
    counts
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Usage {
    pub placements: u64,
    pub projects: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UsageDelta {
    pub placements: i64,
    pub projects: i64,
}

/// Per-component change caused by one `record` call; unchanged components
/// are omitted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReuseDelta(pub BTreeMap<Slug, UsageDelta>);

impl ReuseDelta {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, id: &str) -> UsageDelta {
        self.0.get(id).copied().unwrap_or_default()
    }
}

/// Aggregate usage per component id. Components with no usage are not
/// stored, so equal statistics always serialize identically.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReuseStats(BTreeMap<Slug, Usage>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RareComponent {
    pub id: Slug,
    pub placements: u64,
}

impl ReuseStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn usage(&self, id: &str) -> Usage {
        self.0.get(id).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Slug, &Usage)> {
        self.0.iter()
    }

    /// Replaces one project's contribution: `previous` is what the project
    /// contributed before (`None` for a new project), `current` what it
    /// contributes now.
    pub fn replace_project(
        &mut self,
        previous: Option<&BTreeMap<Slug, u64>>,
        current: &BTreeMap<Slug, u64>,
    ) -> ReuseDelta {
        let empty = BTreeMap::new();
        let previous = previous.unwrap_or(&empty);
        let mut delta = ReuseDelta::default();
        for id in previous.keys().chain(current.keys()) {
            if delta.0.contains_key(id) {
                continue;
            }
            let before = previous.get(id).copied().unwrap_or(0);
            let after = current.get(id).copied().unwrap_or(0);
            let d = UsageDelta {
                placements: after as i64 - before as i64,
                projects: i64::from(after > 0) - i64::from(before > 0),
            };
            if d != UsageDelta::default() {
                delta.0.insert(id.clone(), d);
            }
        }
        for (id, d) in &delta.0 {
            let usage = self.0.entry(id.clone()).or_default();
            usage.placements = usage.placements.saturating_add_signed(d.placements);
            usage.projects = usage.projects.saturating_add_signed(d.projects);
            if *usage == Usage::default() {
                self.0.remove(id);
            }
        }
        delta
    }

    /// Components among `ids` placed at most `threshold` times, ascending by
    /// placements then id.
    pub fn rarely_used<'a>(&self, ids: impl IntoIterator<Item = &'a Slug>, threshold: u64) -> Vec<RareComponent> {
        let mut rare: Vec<RareComponent> = ids
            .into_iter()
            .map(|id| RareComponent {
                id: id.clone(),
                placements: self.usage(id).placements,
            })
            .filter(|r| r.placements <= threshold)
            .collect();
        rare.sort_by(|a, b| a.placements.cmp(&b.placements).then_with(|| a.id.cmp(&b.id)));
        rare.dedup_by(|a, b| a.id == b.id);
        rare
    }
}

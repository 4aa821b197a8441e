use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use super::FuiDocument;
use crate::catalog::ComponentLookup;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IssueCode {
    DupScreenId,
    DupInstanceId,
    UnknownComponent,
    OutOfBounds,
    EmptyLabel,
    BadBindingTarget,
    UnknownProp,
    BadPropType,
    DupEntity,
    DupColumn,
    BadPrimaryKey,
    Overlap,
}

impl IssueCode {
    pub fn as_str(self) -> &'static str {
        match self {
            IssueCode::DupScreenId => "DUP_SCREEN_ID",
            IssueCode::DupInstanceId => "DUP_INSTANCE_ID",
            IssueCode::UnknownComponent => "UNKNOWN_COMPONENT",
            IssueCode::OutOfBounds => "OUT_OF_BOUNDS",
            IssueCode::EmptyLabel => "EMPTY_LABEL",
            IssueCode::BadBindingTarget => "BAD_BINDING_TARGET",
            IssueCode::UnknownProp => "UNKNOWN_PROP",
            IssueCode::BadPropType => "BAD_PROP_TYPE",
            IssueCode::DupEntity => "DUP_ENTITY",
            IssueCode::DupColumn => "DUP_COLUMN",
            IssueCode::BadPrimaryKey => "BAD_PRIMARY_KEY",
            IssueCode::Overlap => "OVERLAP",
        }
    }

    pub fn severity(self) -> Severity {
        match self {
            IssueCode::Overlap => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

impl fmt::Display for IssueCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub severity: Severity,
    pub code: IssueCode,
    /// Document path such as `screen[login]/component[signin]`.
    pub locus: String,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev} {} {}: {}", self.code, self.locus, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn errors(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Warning)
    }

    pub fn error_count(&self) -> usize {
        self.errors().count()
    }

    /// A document is valid when it has no error-severity issues.
    pub fn is_valid(&self) -> bool {
        self.error_count() == 0
    }

    pub fn codes(&self) -> Vec<IssueCode> {
        self.issues.iter().map(|i| i.code).collect()
    }

    fn push(&mut self, code: IssueCode, locus: String, message: String) {
        self.issues.push(Issue {
            severity: code.severity(),
            code,
            locus,
            message,
        });
    }
}

/// Checks referential integrity, geometry and props against `catalog`.
///
/// Never fails: every finding lands in the report, in document order
/// (screens and their components first, then bindings).
pub fn validate_fui(doc: &FuiDocument, catalog: &impl ComponentLookup) -> ValidationReport {
    use IssueCode::*;
    let mut report = ValidationReport::default();

    let mut screen_ids = BTreeSet::new();
    for screen in &doc.screens {
        let screen_locus = format!("screen[{}]", screen.id);
        if !screen_ids.insert(screen.id.as_str()) {
            report.push(
                DupScreenId,
                screen_locus.clone(),
                format!("screen id `{}` is already used", screen.id),
            );
        }

        let mut instance_ids = BTreeSet::new();
        for p in &screen.components {
            let locus = format!("{screen_locus}/component[{}]", p.instance_id);
            if !instance_ids.insert(p.instance_id.as_str()) {
                report.push(
                    DupInstanceId,
                    locus.clone(),
                    format!("instance id `{}` is already used on this screen", p.instance_id),
                );
            }
            match catalog.component(&p.component_ref) {
                None => report.push(
                    UnknownComponent,
                    locus.clone(),
                    format!("component `{}` is not in the catalog", p.component_ref),
                ),
                Some(desc) => {
                    for prop in &p.props {
                        let prop_locus = format!("{locus}/prop[{}]", prop.name);
                        match desc.prop(&prop.name) {
                            None => report.push(
                                UnknownProp,
                                prop_locus,
                                format!("`{}` declares no prop `{}`", desc.id, prop.name),
                            ),
                            Some(spec) if !spec.ty.accepts(&prop.value) => report.push(
                                BadPropType,
                                prop_locus,
                                format!("`{}` does not fit the type of prop `{}`", prop.value, prop.name),
                            ),
                            Some(_) => {}
                        }
                    }
                }
            }
            if p.label.trim().is_empty() {
                report.push(EmptyLabel, locus.clone(), "component label must not be empty".into());
            }
            let r = p.rect();
            if r.right() > u64::from(screen.width) || r.bottom() > u64::from(screen.height) {
                report.push(
                    OutOfBounds,
                    locus,
                    format!(
                        "box ({},{})+({}x{}) leaves the {}x{} screen",
                        r.x, r.y, r.w, r.h, screen.width, screen.height
                    ),
                );
            }
        }

        for (j, b) in screen.components.iter().enumerate() {
            for a in &screen.components[..j] {
                if a.rect().intersects(&b.rect()) {
                    report.push(
                        Overlap,
                        format!("{screen_locus}/component[{}]", b.instance_id),
                        format!("overlaps `{}`", a.instance_id),
                    );
                }
            }
        }
    }

    let mut entities = BTreeSet::new();
    for binding in &doc.bindings {
        let locus = format!("binding[{}]", binding.entity_name);
        if !entities.insert(binding.entity_name.as_str()) {
            report.push(
                DupEntity,
                locus.clone(),
                format!("entity `{}` is bound twice", binding.entity_name),
            );
        }
        let Some(screen) = doc.screen(&binding.screen_id) else {
            report.push(
                BadBindingTarget,
                locus,
                format!("screen `{}` does not exist", binding.screen_id),
            );
            continue;
        };
        let mut columns = BTreeSet::new();
        for map in &binding.field_maps {
            let map_locus = format!("{locus}/map[{}]", map.column);
            if !columns.insert(map.column.as_str()) {
                report.push(
                    DupColumn,
                    map_locus.clone(),
                    format!("column `{}` is mapped twice", map.column),
                );
            }
            match screen.placement(&map.instance_id) {
                None => report.push(
                    BadBindingTarget,
                    map_locus,
                    format!("`{}` is not a component on screen `{}`", map.instance_id, screen.id),
                ),
                Some(p) => {
                    if let Some(desc) = catalog.component(&p.component_ref) {
                        if !desc.is_input() {
                            report.push(
                                BadBindingTarget,
                                map_locus,
                                format!("`{}` ({}) does not accept input", map.instance_id, desc.id),
                            );
                        }
                    }
                }
            }
        }
        if !columns.contains(binding.primary_key.as_str()) {
            report.push(
                BadPrimaryKey,
                locus,
                format!("primary key `{}` is not a mapped column", binding.primary_key),
            );
        }
    }
    report
}

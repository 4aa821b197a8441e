//! The FUI ("framework user interface") document: screens, the components
//! placed on them, and the bindings from input components to entity columns.
//!
//! A document is a plain value. [`parse_fui`] and [`serialize_fui`] convert
//! to and from the canonical XML form; [`validate_fui`] checks it against a
//! catalog; [`apply_edit`] derives a new document from an edit.

mod edit;
mod parse;
mod serialize;
mod validate;
mod xml;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::names::{Ident, Slug};

pub use edit::{apply_edit, Edit, EditError, EditOutcome};
pub use parse::{parse_fui, ParseError};
pub use serialize::{serialize_fui, SerializeError};
pub use validate::{validate_fui, Issue, IssueCode, Severity, ValidationReport};

/// The only format version this crate reads and writes.
pub const FUI_VERSION: u32 = 1;

/// Optional namespace accepted on the root element.
pub const FUI_NAMESPACE: &str = "urn:framework-studio:fui:1";

pub const FUI_MIME: &str = "application/x-fui+xml";
pub const FUI_EXTENSION: &str = ".fui.xml";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuiDocument {
    pub version: u32,
    pub project: Slug,
    pub screens: Vec<Screen>,
    pub bindings: Vec<EntityBinding>,
}

impl FuiDocument {
    pub fn new(project: Slug) -> Self {
        FuiDocument {
            version: FUI_VERSION,
            project,
            screens: Vec::new(),
            bindings: Vec::new(),
        }
    }

    pub fn screen(&self, id: &str) -> Option<&Screen> {
        self.screens.iter().find(|s| s.id.as_str() == id)
    }

    pub fn placements(&self) -> impl Iterator<Item = (&Screen, &Placement)> {
        self.screens
            .iter()
            .flat_map(|s| s.components.iter().map(move |p| (s, p)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Screen {
    pub id: Slug,
    pub title: String,
    pub width: u32,
    pub height: u32,
    /// Authored order is preserved.
    pub components: Vec<Placement>,
}

impl Screen {
    pub fn new(id: Slug, title: impl Into<String>, width: u32, height: u32) -> Self {
        Screen {
            id,
            title: title.into(),
            width,
            height,
            components: Vec::new(),
        }
    }

    pub fn placement(&self, instance_id: &str) -> Option<&Placement> {
        self.components
            .iter()
            .find(|p| p.instance_id.as_str() == instance_id)
    }

    /// Whether any placement carries a handler routing hint.
    pub fn has_actions(&self) -> bool {
        self.components.iter().any(|p| p.action.is_some())
    }
}

/// A component dropped on a screen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub instance_id: Slug,
    pub component_ref: Slug,
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
    pub label: String,
    pub props: Vec<Prop>,
    pub action: Option<Slug>,
}

impl Placement {
    pub fn new(instance_id: Slug, component_ref: Slug, rect: Rect, label: impl Into<String>) -> Self {
        Placement {
            instance_id,
            component_ref,
            x: rect.x,
            y: rect.y,
            w: rect.w,
            h: rect.h,
            label: label.into(),
            props: Vec::new(),
            action: None,
        }
    }

    pub fn rect(&self) -> Rect {
        Rect {
            x: self.x,
            y: self.y,
            w: self.w,
            h: self.h,
        }
    }

    pub fn prop(&self, name: &str) -> Option<&str> {
        self.props
            .iter()
            .find(|p| p.name == name)
            .map(|p| p.value.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Prop {
    pub name: String,
    pub value: String,
}

impl Prop {
    pub fn new(name: impl Into<String>, value: impl Into<String>) -> Self {
        Prop {
            name: name.into(),
            value: value.into(),
        }
    }
}

/// Axis-aligned pixel rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rect {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
}

impl Rect {
    pub const fn new(x: u32, y: u32, w: u32, h: u32) -> Self {
        Rect { x, y, w, h }
    }

    pub fn right(&self) -> u64 {
        u64::from(self.x) + u64::from(self.w)
    }

    pub fn bottom(&self) -> u64 {
        u64::from(self.y) + u64::from(self.h)
    }

    /// Positive-area intersection; rectangles that only share an edge do not
    /// intersect.
    pub fn intersects(&self, other: &Rect) -> bool {
        u64::from(self.x) < other.right()
            && u64::from(other.x) < self.right()
            && u64::from(self.y) < other.bottom()
            && u64::from(other.y) < self.bottom()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityBinding {
    pub screen_id: Slug,
    pub entity_name: Ident,
    pub primary_key: Ident,
    pub field_maps: Vec<FieldMap>,
}

impl EntityBinding {
    pub fn columns(&self) -> impl Iterator<Item = &Ident> {
        self.field_maps.iter().map(|f| &f.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMap {
    pub instance_id: Slug,
    pub column: Ident,
    pub column_type: ColumnType,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColumnType {
    Text(u32),
    Integer,
    Decimal(u32, u32),
    Date,
}

impl ColumnType {
    pub fn is_well_formed(&self) -> bool {
        match *self {
            ColumnType::Text(n) => n >= 1,
            ColumnType::Decimal(p, s) => p >= 1 && s <= p,
            ColumnType::Integer | ColumnType::Date => true,
        }
    }
}

impl fmt::Display for ColumnType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnType::Text(n) => write!(f, "text({n})"),
            ColumnType::Integer => f.write_str("integer"),
            ColumnType::Decimal(p, s) => write!(f, "decimal({p},{s})"),
            ColumnType::Date => f.write_str("date"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{0}` is not a column type (text(n), integer, decimal(p,s), date)")]
pub struct BadColumnType(pub String);

impl FromStr for ColumnType {
    type Err = BadColumnType;

    fn from_str(s: &str) -> Result<Self, BadColumnType> {
        let bad = || BadColumnType(s.into());
        let number = |n: &str| -> Result<u32, BadColumnType> {
            if n.is_empty() || !n.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            n.parse().map_err(|_| bad())
        };
        let ty = match s {
            "integer" => ColumnType::Integer,
            "date" => ColumnType::Date,
            _ => {
                if let Some(inner) = s.strip_prefix("text(").and_then(|r| r.strip_suffix(')')) {
                    ColumnType::Text(number(inner)?)
                } else if let Some(inner) = s.strip_prefix("decimal(").and_then(|r| r.strip_suffix(')')) {
                    let (p, sc) = inner.split_once(',').ok_or_else(bad)?;
                    ColumnType::Decimal(number(p)?, number(sc)?)
                } else {
                    return Err(bad());
                }
            }
        };
        if ty.is_well_formed() {
            Ok(ty)
        } else {
            Err(bad())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn column_type_text_form() {
        for s in ["text(64)", "integer", "decimal(10,2)", "date"] {
            assert_eq!(s.parse::<ColumnType>().unwrap().to_string(), s);
        }
        for s in ["text()", "text(0)", "decimal(2,3)", "decimal(1)", "int", "text(-1)", "text(+4)", "Date"] {
            assert!(s.parse::<ColumnType>().is_err(), "{s}");
        }
    }

    #[test]
    fn rect_intersection() {
        let a = Rect::new(0, 0, 10, 10);
        assert!(a.intersects(&a));
        assert!(a.intersects(&Rect::new(9, 9, 5, 5)));
        assert!(!a.intersects(&Rect::new(10, 0, 5, 5)));
        assert!(!a.intersects(&Rect::new(0, 10, 5, 5)));
        assert!(Rect::new(u32::MAX, 0, u32::MAX, 1).intersects(&Rect::new(u32::MAX, 0, 1, 1)));
    }
}

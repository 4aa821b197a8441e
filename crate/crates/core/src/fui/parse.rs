use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::xml::{self, Attr, Element, Node, Pos};
use super::{
    ColumnType, EntityBinding, FieldMap, FuiDocument, Placement, Prop, Screen, FUI_NAMESPACE,
    FUI_VERSION,
};
use crate::names::{Ident, Slug};

/// Why a FUI text was rejected. Positions are 1-based; columns count
/// characters.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("XML syntax error at {line}:{column}: {message}")]
    Syntax { line: u32, column: u32, message: String },
    #[error("schema violation at {line}:{column}: {message}")]
    Schema { line: u32, column: u32, message: String },
    #[error("unsupported FUI version `{found}` at {line}:{column} (expected {FUI_VERSION})")]
    Version { line: u32, column: u32, found: String },
}

impl ParseError {
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::Syntax { .. } => "XML_SYNTAX",
            ParseError::Schema { .. } => "SCHEMA",
            ParseError::Version { .. } => "VERSION_MISMATCH",
        }
    }

    pub fn position(&self) -> (u32, u32) {
        match *self {
            ParseError::Syntax { line, column, .. }
            | ParseError::Schema { line, column, .. }
            | ParseError::Version { line, column, .. } => (line, column),
        }
    }
}

fn schema(pos: Pos, message: String) -> ParseError {
    ParseError::Schema {
        line: pos.line,
        column: pos.column,
        message,
    }
}

/// Parses a FUI document in strict mode: unknown elements and attributes,
/// stray text, missing attributes and malformed values are all errors.
///
/// Referential checks (duplicate ids, unknown components, geometry bounds)
/// are left to [`validate_fui`](super::validate_fui).
pub fn parse_fui(xml_text: &str) -> Result<FuiDocument, ParseError> {
    let root = xml::parse_document(xml_text).map_err(|e| ParseError::Syntax {
        line: e.pos.line,
        column: e.pos.column,
        message: e.message,
    })?;
    if root.name != "fui" {
        return Err(schema(
            root.pos,
            format!("root element must be <fui>, found <{}>", root.name),
        ));
    }
    let attrs = Attrs::new(&root, &["version", "project", "xmlns"])?;
    if let Some(ns) = attrs.optional("xmlns") {
        if ns.value != FUI_NAMESPACE {
            return Err(schema(
                ns.pos,
                format!("unknown namespace `{}` (expected `{FUI_NAMESPACE}`)", ns.value),
            ));
        }
    }
    let version_attr = attrs.required("version")?;
    let version = match parse_uint(&version_attr.value) {
        Some(FUI_VERSION) => FUI_VERSION,
        _ => {
            return Err(ParseError::Version {
                line: version_attr.pos.line,
                column: version_attr.pos.column,
                found: version_attr.value.clone(),
            })
        }
    };
    let project = attrs.slug("project")?;

    let mut doc = FuiDocument {
        version,
        project,
        screens: Vec::new(),
        bindings: Vec::new(),
    };
    for child in children(&root)? {
        match child.name.as_str() {
            "screen" => doc.screens.push(parse_screen(child)?),
            "binding" => doc.bindings.push(parse_binding(child)?),
            other => return Err(unknown_element(child.pos, other, "fui")),
        }
    }
    Ok(doc)
}

fn parse_screen(el: &Element) -> Result<Screen, ParseError> {
    let attrs = Attrs::new(el, &["id", "title", "width", "height"])?;
    let mut screen = Screen {
        id: attrs.slug("id")?,
        title: attrs.required("title")?.value.clone(),
        width: attrs.positive("width")?,
        height: attrs.positive("height")?,
        components: Vec::new(),
    };
    for child in children(el)? {
        match child.name.as_str() {
            "component" => screen.components.push(parse_component(child)?),
            other => return Err(unknown_element(child.pos, other, "screen")),
        }
    }
    Ok(screen)
}

fn parse_component(el: &Element) -> Result<Placement, ParseError> {
    let attrs = Attrs::new(el, &["ref", "id", "x", "y", "w", "h", "label", "action"])?;
    let action = match attrs.optional("action") {
        Some(a) => Some(slug_value(a)?),
        None => None,
    };
    let mut placement = Placement {
        instance_id: attrs.slug("id")?,
        component_ref: attrs.slug("ref")?,
        x: attrs.uint("x")?,
        y: attrs.uint("y")?,
        w: attrs.positive("w")?,
        h: attrs.positive("h")?,
        label: attrs.required("label")?.value.clone(),
        props: Vec::new(),
        action,
    };
    for child in children(el)? {
        if child.name != "prop" {
            return Err(unknown_element(child.pos, &child.name, "component"));
        }
        let prop_attrs = Attrs::new(child, &["name", "value"])?;
        no_children(child)?;
        let name = prop_attrs.required("name")?;
        if name.value.is_empty() {
            return Err(schema(name.pos, "prop name must not be empty".into()));
        }
        if placement.props.iter().any(|p| p.name == name.value) {
            return Err(schema(
                name.pos,
                format!("prop `{}` given twice on component `{}`", name.value, placement.instance_id),
            ));
        }
        placement
            .props
            .push(Prop::new(name.value.clone(), prop_attrs.required("value")?.value.clone()));
    }
    Ok(placement)
}

fn parse_binding(el: &Element) -> Result<EntityBinding, ParseError> {
    let attrs = Attrs::new(el, &["screen", "entity", "pk"])?;
    let mut binding = EntityBinding {
        screen_id: attrs.slug("screen")?,
        entity_name: attrs.ident("entity")?,
        primary_key: attrs.ident("pk")?,
        field_maps: Vec::new(),
    };
    for child in children(el)? {
        if child.name != "map" {
            return Err(unknown_element(child.pos, &child.name, "binding"));
        }
        let map_attrs = Attrs::new(child, &["component", "column", "type"])?;
        no_children(child)?;
        let ty = map_attrs.required("type")?;
        binding.field_maps.push(FieldMap {
            instance_id: map_attrs.slug("component")?,
            column: map_attrs.ident("column")?,
            column_type: ty
                .value
                .parse::<ColumnType>()
                .map_err(|e| schema(ty.pos, e.to_string()))?,
        });
    }
    Ok(binding)
}

fn unknown_element(pos: Pos, name: &str, parent: &str) -> ParseError {
    schema(pos, format!("unknown element <{name}> inside <{parent}>"))
}

/// Child elements, rejecting any non-whitespace text.
fn children(el: &Element) -> Result<impl Iterator<Item = &Element>, ParseError> {
    for node in &el.children {
        if let Node::Text(text, pos) = node {
            if !text.chars().all(|c| matches!(c, ' ' | '\t' | '\n' | '\r')) {
                return Err(schema(*pos, format!("unexpected text inside <{}>", el.name)));
            }
        }
    }
    Ok(el.children.iter().filter_map(|n| match n {
        Node::Element(e) => Some(e),
        Node::Text(..) => None,
    }))
}

fn no_children(el: &Element) -> Result<(), ParseError> {
    if let Some(child) = children(el)?.next() {
        return Err(unknown_element(child.pos, &child.name, &el.name));
    }
    Ok(())
}

fn parse_uint(s: &str) -> Option<u32> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn slug_value(attr: &Attr) -> Result<Slug, ParseError> {
    Slug::new(attr.value.clone()).map_err(|e| schema(attr.pos, format!("attribute `{}`: {e}", attr.name)))
}

struct Attrs<'a> {
    el: &'a Element,
}

impl<'a> Attrs<'a> {
    fn new(el: &'a Element, allowed: &[&str]) -> Result<Self, ParseError> {
        if let Some(a) = el.attrs.iter().find(|a| !allowed.contains(&a.name.as_str())) {
            return Err(schema(
                a.pos,
                format!("unknown attribute `{}` on <{}>", a.name, el.name),
            ));
        }
        Ok(Attrs { el })
    }

    fn optional(&self, name: &str) -> Option<&'a Attr> {
        self.el.attrs.iter().find(|a| a.name == name)
    }

    fn required(&self, name: &str) -> Result<&'a Attr, ParseError> {
        self.optional(name).ok_or_else(|| {
            schema(
                self.el.pos,
                format!("<{}> is missing required attribute `{name}`", self.el.name),
            )
        })
    }

    fn slug(&self, name: &str) -> Result<Slug, ParseError> {
        slug_value(self.required(name)?)
    }

    fn ident(&self, name: &str) -> Result<Ident, ParseError> {
        let attr = self.required(name)?;
        Ident::new(attr.value.clone()).map_err(|e| schema(attr.pos, format!("attribute `{name}`: {e}")))
    }

    fn uint(&self, name: &str) -> Result<u32, ParseError> {
        let attr = self.required(name)?;
        parse_uint(&attr.value).ok_or_else(|| {
            schema(
                attr.pos,
                format!("attribute `{name}` must be a non-negative integer, found `{}`", attr.value),
            )
        })
    }

    fn positive(&self, name: &str) -> Result<u32, ParseError> {
        let attr = self.required(name)?;
        match parse_uint(&attr.value) {
            Some(n) if n > 0 => Ok(n),
            _ => Err(schema(
                attr.pos,
                format!("attribute `{name}` must be a positive integer, found `{}`", attr.value),
            )),
        }
    }
}

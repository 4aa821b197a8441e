use alloc::format;
use alloc::string::String;
use core::fmt::Write;

use super::xml::is_xml_char;
use super::{FuiDocument, Placement, FUI_VERSION};

/// The first structural invariant a document breaks.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot serialize {locus}: {message}")]
pub struct SerializeError {
    pub locus: String,
    pub message: String,
}

/// Writes the canonical XML form of `doc`.
///
/// Canonical means: XML declaration, attributes in the fixed order of the
/// format, two-space indentation, LF line endings, a trailing newline, empty
/// elements self-closed, and only `& < > "` plus tab/LF/CR escaped. Equal
/// documents always produce identical bytes.
///
/// The invariants checked are those [`parse_fui`](super::parse_fui)
/// enforces, so every parsed document serializes and every serialized
/// document parses back to an equal value.
pub fn serialize_fui(doc: &FuiDocument) -> Result<String, SerializeError> {
    check(doc)?;
    let mut out = String::with_capacity(256 + doc.screens.len() * 512);
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = write!(out, "<fui version=\"{}\" project=\"{}\"", doc.version, doc.project);
    if doc.screens.is_empty() && doc.bindings.is_empty() {
        out.push_str("/>\n");
        return Ok(out);
    }
    out.push_str(">\n");
    for screen in &doc.screens {
        let _ = write!(
            out,
            "  <screen id=\"{}\" title=\"{}\" width=\"{}\" height=\"{}\"",
            screen.id,
            Escaped(&screen.title),
            screen.width,
            screen.height
        );
        if screen.components.is_empty() {
            out.push_str("/>\n");
            continue;
        }
        out.push_str(">\n");
        for p in &screen.components {
            write_component(&mut out, p);
        }
        out.push_str("  </screen>\n");
    }
    for binding in &doc.bindings {
        let _ = write!(
            out,
            "  <binding screen=\"{}\" entity=\"{}\" pk=\"{}\"",
            binding.screen_id, binding.entity_name, binding.primary_key
        );
        if binding.field_maps.is_empty() {
            out.push_str("/>\n");
            continue;
        }
        out.push_str(">\n");
        for map in &binding.field_maps {
            let _ = writeln!(
                out,
                "    <map component=\"{}\" column=\"{}\" type=\"{}\"/>",
                map.instance_id, map.column, map.column_type
            );
        }
        out.push_str("  </binding>\n");
    }
    out.push_str("</fui>\n");
    Ok(out)
}

fn write_component(out: &mut String, p: &Placement) {
    let _ = write!(
        out,
        "    <component ref=\"{}\" id=\"{}\" x=\"{}\" y=\"{}\" w=\"{}\" h=\"{}\" label=\"{}\"",
        p.component_ref,
        p.instance_id,
        p.x,
        p.y,
        p.w,
        p.h,
        Escaped(&p.label)
    );
    if let Some(action) = &p.action {
        let _ = write!(out, " action=\"{action}\"");
    }
    if p.props.is_empty() {
        out.push_str("/>\n");
        return;
    }
    out.push_str(">\n");
    for prop in &p.props {
        let _ = writeln!(
            out,
            "      <prop name=\"{}\" value=\"{}\"/>",
            Escaped(&prop.name),
            Escaped(&prop.value)
        );
    }
    out.push_str("    </component>\n");
}

struct Escaped<'a>(&'a str);

impl core::fmt::Display for Escaped<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let mut last = 0;
        for (i, c) in self.0.char_indices() {
            let rep = match c {
                '&' => "&amp;",
                '<' => "&lt;",
                '>' => "&gt;",
                '"' => "&quot;",
                '\t' => "&#9;",
                '\n' => "&#10;",
                '\r' => "&#13;",
                _ => continue,
            };
            f.write_str(&self.0[last..i])?;
            f.write_str(rep)?;
            last = i + c.len_utf8();
        }
        f.write_str(&self.0[last..])
    }
}

fn check(doc: &FuiDocument) -> Result<(), SerializeError> {
    let fail = |locus: String, message: String| Err(SerializeError { locus, message });
    if doc.version != FUI_VERSION {
        return fail(
            "fui".into(),
            format!("version {} is not supported (expected {FUI_VERSION})", doc.version),
        );
    }
    let text = |locus: &dyn Fn() -> String, what: &str, s: &str| -> Result<(), SerializeError> {
        match s.chars().find(|&c| !is_xml_char(c)) {
            Some(c) => fail(
                locus(),
                format!("{what} contains U+{:04X}, which XML cannot carry", c as u32),
            ),
            None => Ok(()),
        }
    };
    for screen in &doc.screens {
        let locus = || format!("screen[{}]", screen.id);
        text(&locus, "title", &screen.title)?;
        if screen.width == 0 || screen.height == 0 {
            return fail(locus(), "screen width and height must be positive".into());
        }
        for p in &screen.components {
            let locus = || format!("screen[{}]/component[{}]", screen.id, p.instance_id);
            if p.w == 0 || p.h == 0 {
                return fail(locus(), "component w and h must be positive".into());
            }
            text(&locus, "label", &p.label)?;
            for (i, prop) in p.props.iter().enumerate() {
                if prop.name.is_empty() {
                    return fail(locus(), "prop name must not be empty".into());
                }
                if p.props[..i].iter().any(|q| q.name == prop.name) {
                    return fail(locus(), format!("prop `{}` appears twice", prop.name));
                }
                text(&locus, "prop name", &prop.name)?;
                text(&locus, "prop value", &prop.value)?;
            }
        }
    }
    for binding in &doc.bindings {
        for map in &binding.field_maps {
            if !map.column_type.is_well_formed() {
                return fail(
                    format!("binding[{}]/map[{}]", binding.entity_name, map.column),
                    format!("column type `{}` is malformed", map.column_type),
                );
            }
        }
    }
    Ok(())
}

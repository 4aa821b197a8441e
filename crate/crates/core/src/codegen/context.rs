//! Render-context construction. A pure function of the document, the
//! catalog heads it references and the pack identity.
//!
//! Root keys: `project`, `project_class`, `pack` (`name`, `version`,
//! `target_label`), `generated_by`, `screens`, `action_screens`,
//! `entities`. Per-instance templates additionally see `screen` or `entity`;
//! the schema template sees `ddl`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::catalog::ComponentLookup;
use crate::fui::{EntityBinding, FuiDocument, Placement, Screen};
use crate::names::{camel_case, pascal_case};
use crate::template::Value;

use super::schema::sql_type;

pub fn html_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            _ => out.push(c),
        }
    }
    out
}

/// Escapes for a double-quoted JavaScript/Java string literal.
pub fn string_literal_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&alloc::format!("\\u{:04x}", c as u32)),
            _ => out.push(c),
        }
    }
    out
}

pub(crate) struct Contexts {
    pub root: Value,
    pub screens: BTreeMap<String, Value>,
    pub entities: BTreeMap<String, Value>,
}

fn component_value(p: &Placement, catalog: &impl ComponentLookup) -> Value {
    let mut v = Value::map()
        .with("id", &*p.instance_id)
        .with("var_name", camel_case(&p.instance_id))
        .with("ref", &*p.component_ref)
        .with("label", &p.label)
        .with("label_html", html_escape(&p.label))
        .with("label_str", string_literal_escape(&p.label))
        .with("x", p.x)
        .with("y", p.y)
        .with("w", p.w)
        .with("h", p.h)
        .with("has_action", p.action.is_some())
        .with("action", p.action.as_deref().unwrap_or(""));

    let mut hook = Value::map();
    let mut props = Vec::new();
    let mut prop = Value::map();
    match catalog.component(&p.component_ref) {
        Some(desc) => {
            v.insert("name", &desc.name);
            v.insert("category", desc.category.as_str());
            v.insert("is_input", desc.is_input());
            v.insert("hooks", desc.template_hooks.iter().map(|h| h.as_str()).collect::<Value>());
            for h in &desc.template_hooks {
                hook.insert(h, true);
            }
            for spec in &desc.prop_schema {
                let value = p.prop(&spec.name).map(String::from).or_else(|| spec.default.clone());
                if let Some(value) = value {
                    props.push(
                        Value::map()
                            .with("name", &spec.name)
                            .with("value", &value)
                            .with("value_html", html_escape(&value)),
                    );
                    prop.insert(&spec.name, value);
                }
            }
        }
        None => {
            v.insert("name", &*p.component_ref);
            v.insert("category", "");
            v.insert("is_input", false);
            v.insert("hooks", Value::List(Vec::new()));
        }
    }
    let is_input = v.get("is_input") == Some(&Value::Bool(true));
    v.with("is_display", !is_input && p.action.is_none())
        .with("hook", hook)
        .with("props", props)
        .with("prop", prop)
}

fn entity_value(b: &EntityBinding) -> Value {
    let class = pascal_case(&b.entity_name);
    let columns: Vec<Value> = b
        .field_maps
        .iter()
        .map(|m| {
            Value::map()
                .with("name", &*m.column)
                .with("field", camel_case(&m.column))
                .with("sql_type", sql_type(m.column_type))
                .with("type", alloc::format!("{}", m.column_type))
                .with("component", &*m.instance_id)
                .with("is_pk", m.column == b.primary_key)
        })
        .collect();
    let non_pk: Vec<Value> = columns
        .iter()
        .filter(|c| c.get("is_pk") == Some(&Value::Bool(false)))
        .cloned()
        .collect();
    let names: Vec<&str> = b.field_maps.iter().map(|m| m.column.as_str()).collect();
    let placeholders: Vec<&str> = names.iter().map(|_| "?").collect();
    Value::map()
        .with("name", &*b.entity_name)
        .with("table", &*b.entity_name)
        .with("class_name", class.clone())
        .with("dao_class", alloc::format!("{class}Dao"))
        .with("var_name", camel_case(&b.entity_name))
        .with("screen_id", &*b.screen_id)
        .with("primary_key", &*b.primary_key)
        .with("pk_field", camel_case(&b.primary_key))
        .with("columns", Value::List(columns))
        .with("non_pk_columns", Value::List(non_pk))
        .with("column_list", names.join(", "))
        .with("placeholders", placeholders.join(", "))
}

fn screen_value(screen: &Screen, doc: &FuiDocument, entities: &BTreeMap<String, Value>, catalog: &impl ComponentLookup) -> Value {
    let components: Vec<Value> = screen
        .components
        .iter()
        .map(|p| component_value(p, catalog))
        .collect();

    let mut action_names: Vec<&str> = Vec::new();
    for p in &screen.components {
        if let Some(a) = &p.action {
            if !action_names.contains(&a.as_str()) {
                action_names.push(a);
            }
        }
    }
    let actions: Vec<Value> = action_names
        .iter()
        .map(|a| {
            let triggers: Vec<Value> = screen
                .components
                .iter()
                .zip(&components)
                .filter(|(p, _)| p.action.as_deref() == Some(*a))
                .map(|(_, c)| c.clone())
                .collect();
            Value::map()
                .with("name", *a)
                .with("method_name", camel_case(a))
                .with("class_name", pascal_case(a))
                .with("triggers", Value::List(triggers))
        })
        .collect();

    let bound: Vec<Value> = doc
        .bindings
        .iter()
        .filter(|b| b.screen_id == screen.id)
        .filter_map(|b| entities.get(b.entity_name.as_str()).cloned())
        .collect();

    Value::map()
        .with("id", &*screen.id)
        .with("title", &screen.title)
        .with("title_html", html_escape(&screen.title))
        .with("title_str", string_literal_escape(&screen.title))
        .with("width", screen.width)
        .with("height", screen.height)
        .with("class_name", pascal_case(&screen.id))
        .with("var_name", camel_case(&screen.id))
        .with("has_actions", !actions.is_empty())
        .with("actions", Value::List(actions))
        .with("has_entities", !bound.is_empty())
        .with("entities", Value::List(bound))
        .with("components", Value::List(components))
}

pub(crate) fn build(doc: &FuiDocument, catalog: &impl ComponentLookup, pack_name: &str, pack_version: u32, target_label: &str) -> Contexts {
    let mut entities = BTreeMap::new();
    let mut entity_list = Vec::new();
    for b in &doc.bindings {
        let v = entity_value(b);
        entities.entry(String::from(b.entity_name.as_str())).or_insert_with(|| v.clone());
        entity_list.push(v);
    }

    let mut screens = BTreeMap::new();
    let mut screen_list = Vec::new();
    let mut action_screens = Vec::new();
    for s in &doc.screens {
        let v = screen_value(s, doc, &entities, catalog);
        if s.has_actions() {
            action_screens.push(v.clone());
        }
        screens.entry(String::from(s.id.as_str())).or_insert_with(|| v.clone());
        screen_list.push(v);
    }

    let root = Value::map()
        .with("project", &*doc.project)
        .with("project_class", pascal_case(&doc.project))
        .with(
            "pack",
            Value::map()
                .with("name", pack_name)
                .with("version", pack_version)
                .with("target_label", target_label),
        )
        .with("generated_by", alloc::format!("{pack_name} v{pack_version}"))
        .with("screens", Value::List(screen_list))
        .with("action_screens", Value::List(action_screens))
        .with("entities", Value::List(entity_list));
    Contexts {
        root,
        screens,
        entities,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes() {
        assert_eq!(html_escape("a<b & \"c\" 'd'"), "a&lt;b &amp; &quot;c&quot; &#39;d&#39;");
        assert_eq!(string_literal_escape("a\"b\\c\n\u{1}"), "a\\\"b\\\\c\\n\\u0001");
    }
}

use alloc::string::String;
use alloc::vec::Vec;

use super::{Node, Path, Template, Value};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RenderError {
    #[error("line {line}: no value at `{path}`")]
    MissingPath { path: String, line: u32 },
    #[error("line {line}: `{path}` is a {found}, expected {expected}")]
    TypeMismatch {
        path: String,
        line: u32,
        expected: &'static str,
        found: &'static str,
    },
}

impl RenderError {
    pub fn code(&self) -> &'static str {
        match self {
            RenderError::MissingPath { .. } => "MISSING_PATH",
            RenderError::TypeMismatch { .. } => "TYPE_MISMATCH",
        }
    }
}

struct Scope<'a> {
    root: &'a Value,
    items: Vec<&'a Value>,
}

impl<'a> Scope<'a> {
    fn resolve(&self, path: &Path, line: u32) -> Result<&'a Value, RenderError> {
        let missing = || RenderError::MissingPath {
            path: alloc::format!("{path}"),
            line,
        };
        let (mut cur, segs) = match path {
            Path::Root(segs) => (self.root, segs),
            Path::Item(segs) => (*self.items.last().ok_or_else(missing)?, segs),
        };
        for seg in segs {
            cur = cur.get(seg).ok_or_else(missing)?;
        }
        Ok(cur)
    }
}

/// Renders `template` against `ctx`. Pure: output depends only on the two
/// arguments.
pub fn render(template: &Template, ctx: &Value) -> Result<String, RenderError> {
    let mut out = String::new();
    let mut scope = Scope {
        root: ctx,
        items: Vec::new(),
    };
    render_nodes(&template.nodes, &mut scope, &mut out)?;
    Ok(out)
}

fn render_nodes<'a>(nodes: &'a [Node], scope: &mut Scope<'a>, out: &mut String) -> Result<(), RenderError> {
    for node in nodes {
        match node {
            Node::Text(t) => out.push_str(t),
            Node::Subst { path, line } => match scope.resolve(path, *line)? {
                Value::Str(s) => out.push_str(s),
                Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
                other => {
                    return Err(RenderError::TypeMismatch {
                        path: alloc::format!("{path}"),
                        line: *line,
                        expected: "a string or boolean",
                        found: other.kind(),
                    })
                }
            },
            Node::Each { path, line, body } => match scope.resolve(path, *line)? {
                Value::List(items) => {
                    for item in items {
                        scope.items.push(item);
                        let result = render_nodes(body, scope, out);
                        scope.items.pop();
                        result?;
                    }
                }
                other => {
                    return Err(RenderError::TypeMismatch {
                        path: alloc::format!("{path}"),
                        line: *line,
                        expected: "a list",
                        found: other.kind(),
                    })
                }
            },
            Node::If { path, line, body } => {
                if scope.resolve(path, *line)?.is_truthy() {
                    render_nodes(body, scope, out)?;
                }
            }
        }
    }
    Ok(())
}

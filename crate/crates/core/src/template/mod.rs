//! Strict mustache-like template engine.
//!
//! Grammar:
//!
//! ```text
//! {{path.to.value}}                substitution (paths resolve from the root)
//! {{.}}  {{.field}}                current item / field of it, inside #each
//! {{#each path}} ... {{/each}}     iterate a list
//! {{#if path}} ... {{/if}}         true, non-empty string, non-empty list or map
//! \{{                              a literal `{{`
//! ```
//!
//! A section tag alone on its line (only spaces or tabs around it) swallows
//! that whole line, so block structure does not leave blank lines behind.
//! Rendering is strict: an absent path is an error, never empty output.

mod render;
mod value;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use render::{render, RenderError};
pub use value::Value;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Path {
    /// `a.b.c`, resolved from the context root.
    Root(Vec<String>),
    /// `.` or `.a.b`, resolved from the innermost `#each` item.
    Item(Vec<String>),
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Path::Root(segs) => f.write_str(&segs.join(".")),
            Path::Item(segs) if segs.is_empty() => f.write_str("."),
            Path::Item(segs) => write!(f, ".{}", segs.join(".")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Text(String),
    Subst { path: Path, line: u32 },
    Each { path: Path, line: u32, body: Vec<Node> },
    If { path: Path, line: u32, body: Vec<Node> },
}

/// Parsed template body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub nodes: Vec<Node>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionKind {
    Each,
    If,
}

impl SectionKind {
    fn name(self) -> &'static str {
        match self {
            SectionKind::Each => "each",
            SectionKind::If => "if",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TemplateError {
    #[error("line {line}: `{{{{#{}}}}}` is never closed", kind.name())]
    UnclosedSection { kind: SectionKind, line: u32 },
    #[error("line {line}: `{{{{` without matching `}}}}`")]
    UnterminatedTag { line: u32 },
    #[error("line {line}: empty placeholder path")]
    EmptyPath { line: u32 },
    #[error("line {line}: malformed path `{path}`")]
    BadPath { path: String, line: u32 },
    #[error("line {line}: `{{{{/{found}}}}}` closes `{{{{#{}}}}}` opened on line {open_line}", expected.name())]
    MismatchedClose {
        expected: SectionKind,
        open_line: u32,
        found: String,
        line: u32,
    },
    #[error("line {line}: `{{{{/{found}}}}}` has no open section")]
    UnexpectedClose { found: String, line: u32 },
    #[error("line {line}: unknown directive `{directive}`")]
    UnknownDirective { directive: String, line: u32 },
}

impl TemplateError {
    pub fn code(&self) -> &'static str {
        match self {
            TemplateError::UnclosedSection { .. } => "UNCLOSED_SECTION",
            TemplateError::UnterminatedTag { .. } => "UNTERMINATED_TAG",
            TemplateError::EmptyPath { .. } => "EMPTY_PATH",
            TemplateError::BadPath { .. } => "BAD_PATH",
            TemplateError::MismatchedClose { .. } => "MISMATCHED_CLOSE",
            TemplateError::UnexpectedClose { .. } => "UNEXPECTED_CLOSE",
            TemplateError::UnknownDirective { .. } => "UNKNOWN_DIRECTIVE",
        }
    }

    pub fn line(&self) -> u32 {
        match *self {
            TemplateError::UnclosedSection { line, .. }
            | TemplateError::UnterminatedTag { line }
            | TemplateError::EmptyPath { line }
            | TemplateError::BadPath { line, .. }
            | TemplateError::MismatchedClose { line, .. }
            | TemplateError::UnexpectedClose { line, .. }
            | TemplateError::UnknownDirective { line, .. } => line,
        }
    }
}

fn parse_path(raw: &str, line: u32) -> Result<Path, TemplateError> {
    if raw.is_empty() {
        return Err(TemplateError::EmptyPath { line });
    }
    if raw == "." {
        return Ok(Path::Item(Vec::new()));
    }
    let (item, body) = match raw.strip_prefix('.') {
        Some(rest) => (true, rest),
        None => (false, raw),
    };
    let segs: Vec<String> = body.split('.').map(String::from).collect();
    let valid = segs.iter().all(|s| {
        !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-')
    });
    if !valid {
        return Err(TemplateError::BadPath {
            path: raw.into(),
            line,
        });
    }
    Ok(if item { Path::Item(segs) } else { Path::Root(segs) })
}

fn is_blank(s: &str) -> bool {
    s.bytes().all(|b| b == b' ' || b == b'\t')
}

struct Frame {
    kind: SectionKind,
    path: Path,
    line: u32,
    nodes: Vec<Node>,
}

/// Parses a template body into its AST.
pub fn parse_template(body: &str) -> Result<Template, TemplateError> {
    let mut stack: Vec<Frame> = Vec::new();
    let mut nodes: Vec<Node> = Vec::new();
    let mut text = String::new();
    let mut line: u32 = 1;
    let mut i = 0;
    let bytes = body.as_bytes();

    fn flush(text: &mut String, stack: &mut [Frame], nodes: &mut Vec<Node>) {
        if !text.is_empty() {
            let target = match stack.last_mut() {
                Some(f) => &mut f.nodes,
                None => nodes,
            };
            target.push(Node::Text(core::mem::take(text)));
        }
    }

    while i < bytes.len() {
        if body[i..].starts_with("\\{{") {
            text.push_str("{{");
            i += 3;
            continue;
        }
        if !body[i..].starts_with("{{") {
            let c = body[i..].chars().next().expect("in bounds");
            if c == '\n' {
                line += 1;
            }
            text.push(c);
            i += c.len_utf8();
            continue;
        }

        let tag_line = line;
        let tag_start = i;
        let Some(close) = body[i + 2..].find("}}") else {
            return Err(TemplateError::UnterminatedTag { line: tag_line });
        };
        let inner_raw = &body[i + 2..i + 2 + close];
        // A tag never spans a newline; it is far more likely an unclosed `{{`.
        if inner_raw.contains('\n') {
            return Err(TemplateError::UnterminatedTag { line: tag_line });
        }
        let inner = inner_raw.trim();
        let mut tag_end = i + 2 + close + 2;

        let section = inner.starts_with('#') || inner.starts_with('/');
        if section {
            let line_start = body[..tag_start].rfind('\n').map_or(0, |p| p + 1);
            let line_end = body[tag_end..].find('\n').map_or(body.len(), |p| tag_end + p);
            if is_blank(&body[line_start..tag_start]) && is_blank(&body[tag_end..line_end]) {
                let keep = text.trim_end_matches([' ', '\t']).len();
                text.truncate(keep);
                tag_end = if line_end < body.len() { line_end + 1 } else { line_end };
                if line_end < body.len() {
                    line += 1;
                }
            }
        }

        if let Some(rest) = inner.strip_prefix('#') {
            let (directive, arg) = match rest.split_once(char::is_whitespace) {
                Some((d, a)) => (d, a.trim()),
                None => (rest, ""),
            };
            let kind = match directive {
                "each" => SectionKind::Each,
                "if" => SectionKind::If,
                _ => {
                    return Err(TemplateError::UnknownDirective {
                        directive: alloc::format!("#{directive}"),
                        line: tag_line,
                    })
                }
            };
            let path = parse_path(arg, tag_line)?;
            flush(&mut text, &mut stack, &mut nodes);
            stack.push(Frame {
                kind,
                path,
                line: tag_line,
                nodes: Vec::new(),
            });
        } else if let Some(rest) = inner.strip_prefix('/') {
            let found = rest.trim();
            let Some(top) = stack.last() else {
                return Err(TemplateError::UnexpectedClose {
                    found: found.into(),
                    line: tag_line,
                });
            };
            if found != top.kind.name() {
                return Err(TemplateError::MismatchedClose {
                    expected: top.kind,
                    open_line: top.line,
                    found: found.into(),
                    line: tag_line,
                });
            }
            flush(&mut text, &mut stack, &mut nodes);
            let frame = stack.pop().expect("checked above");
            let node = match frame.kind {
                SectionKind::Each => Node::Each {
                    path: frame.path,
                    line: frame.line,
                    body: frame.nodes,
                },
                SectionKind::If => Node::If {
                    path: frame.path,
                    line: frame.line,
                    body: frame.nodes,
                },
            };
            match stack.last_mut() {
                Some(parent) => parent.nodes.push(node),
                None => nodes.push(node),
            }
        } else {
            let path = parse_path(inner, tag_line)?;
            flush(&mut text, &mut stack, &mut nodes);
            let subst = Node::Subst { path, line: tag_line };
            match stack.last_mut() {
                Some(f) => f.nodes.push(subst),
                None => nodes.push(subst),
            }
        }
        i = tag_end;
    }

    if let Some(open) = stack.last() {
        return Err(TemplateError::UnclosedSection {
            kind: open.kind,
            line: open.line,
        });
    }
    flush(&mut text, &mut stack, &mut nodes);
    Ok(Template { nodes })
}

impl Template {
    pub fn parse(body: &str) -> Result<Self, TemplateError> {
        parse_template(body)
    }
}

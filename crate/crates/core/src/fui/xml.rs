//! Minimal non-validating XML 1.0 reader producing an element tree with
//! source positions. Covers what the FUI format needs: an optional
//! declaration, comments, processing instructions, CDATA, the five
//! predefined entities and character references. DOCTYPE is rejected.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

const MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Pos {
    pub line: u32,
    pub column: u32,
}

#[derive(Debug)]
pub(crate) struct Element {
    pub name: String,
    pub attrs: Vec<Attr>,
    pub children: Vec<Node>,
    pub pos: Pos,
}

#[derive(Debug)]
pub(crate) struct Attr {
    pub name: String,
    pub value: String,
    pub pos: Pos,
}

#[derive(Debug)]
pub(crate) enum Node {
    Element(Element),
    Text(String, Pos),
}

#[derive(Debug)]
pub(crate) struct SyntaxError {
    pub pos: Pos,
    pub message: String,
}

pub(crate) fn is_xml_char(c: char) -> bool {
    matches!(c, '\t' | '\n' | '\r' | '\u{20}'..='\u{D7FF}' | '\u{E000}'..='\u{FFFD}' | '\u{10000}'..)
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_' || c == ':' || (!c.is_ascii() && c.is_alphabetic())
}

fn is_name_char(c: char) -> bool {
    is_name_start(c) || c.is_ascii_digit() || c == '-' || c == '.' || (!c.is_ascii() && c.is_alphanumeric())
}

fn is_space(c: char) -> bool {
    matches!(c, ' ' | '\t' | '\n' | '\r')
}

struct Cursor<'a> {
    rest: &'a str,
    pos: Pos,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.rest.chars().next()
    }

    fn starts_with(&self, s: &str) -> bool {
        self.rest.starts_with(s)
    }

    fn bump(&mut self) -> Result<Option<char>, SyntaxError> {
        let Some(c) = self.peek() else {
            return Ok(None);
        };
        if !is_xml_char(c) {
            return Err(self.err(format!("character U+{:04X} is not allowed in XML", c as u32)));
        }
        self.rest = &self.rest[c.len_utf8()..];
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Ok(Some(c))
    }

    fn expect(&mut self, s: &str) -> Result<(), SyntaxError> {
        if self.starts_with(s) {
            for _ in s.chars() {
                self.bump()?;
            }
            Ok(())
        } else {
            Err(self.err(format!("expected `{s}`")))
        }
    }

    fn skip_space(&mut self) -> Result<bool, SyntaxError> {
        let mut any = false;
        while self.peek().is_some_and(is_space) {
            self.bump()?;
            any = true;
        }
        Ok(any)
    }

    /// Consumes up to and including `end`, returning what preceded it.
    fn take_until(&mut self, end: &str, what: &str) -> Result<String, SyntaxError> {
        let start = self.pos;
        let mut out = String::new();
        loop {
            if self.starts_with(end) {
                self.expect(end)?;
                return Ok(out);
            }
            match self.bump()? {
                Some(c) => out.push(c),
                None => {
                    return Err(SyntaxError {
                        pos: start,
                        message: format!("unterminated {what}"),
                    })
                }
            }
        }
    }

    fn err(&self, message: String) -> SyntaxError {
        SyntaxError {
            pos: self.pos,
            message,
        }
    }

    fn name(&mut self) -> Result<String, SyntaxError> {
        match self.peek() {
            Some(c) if is_name_start(c) => {}
            Some(c) => return Err(self.err(format!("unexpected `{c}`, expected a name"))),
            None => return Err(self.err("unexpected end of input, expected a name".into())),
        }
        let mut name = String::new();
        while let Some(c) = self.peek().filter(|&c| is_name_char(c)) {
            self.bump()?;
            name.push(c);
        }
        Ok(name)
    }

    /// Parses `&...;` after the `&` has been seen (not consumed).
    fn reference(&mut self) -> Result<char, SyntaxError> {
        let at = self.pos;
        self.expect("&")?;
        let mut body = String::new();
        loop {
            match self.bump()? {
                Some(';') => break,
                Some(c) if body.len() < 12 && (c.is_ascii_alphanumeric() || c == '#') => body.push(c),
                _ => {
                    return Err(SyntaxError {
                        pos: at,
                        message: "malformed entity reference".into(),
                    })
                }
            }
        }
        let c = match body.as_str() {
            "lt" => Some('<'),
            "gt" => Some('>'),
            "amp" => Some('&'),
            "quot" => Some('"'),
            "apos" => Some('\''),
            _ => {
                let code = if let Some(hex) = body.strip_prefix("#x") {
                    u32::from_str_radix(hex, 16).ok()
                } else if let Some(dec) = body.strip_prefix('#') {
                    dec.parse::<u32>().ok()
                } else {
                    None
                };
                code.and_then(char::from_u32).filter(|&c| is_xml_char(c))
            }
        };
        c.ok_or(SyntaxError {
            pos: at,
            message: format!("unknown or invalid reference `&{body};`"),
        })
    }

    fn comment(&mut self) -> Result<(), SyntaxError> {
        let at = self.pos;
        self.expect("<!--")?;
        let body = self.take_until("-->", "comment")?;
        if body.contains("--") || body.ends_with('-') {
            return Err(SyntaxError {
                pos: at,
                message: "`--` is not allowed inside a comment".into(),
            });
        }
        Ok(())
    }

    fn processing_instruction(&mut self) -> Result<(), SyntaxError> {
        let at = self.pos;
        self.expect("<?")?;
        let target = self.name()?;
        if target.eq_ignore_ascii_case("xml") {
            return Err(SyntaxError {
                pos: at,
                message: "XML declaration is only allowed at the start of the document".into(),
            });
        }
        self.take_until("?>", "processing instruction")?;
        Ok(())
    }

    fn misc(&mut self) -> Result<(), SyntaxError> {
        loop {
            self.skip_space()?;
            if self.starts_with("<!--") {
                self.comment()?;
            } else if self.starts_with("<?") {
                self.processing_instruction()?;
            } else if self.starts_with("<!DOCTYPE") {
                return Err(self.err("DOCTYPE declarations are not supported".into()));
            } else {
                return Ok(());
            }
        }
    }

    fn attr_value(&mut self) -> Result<String, SyntaxError> {
        let quote = match self.peek() {
            Some(q @ ('"' | '\'')) => q,
            _ => return Err(self.err("expected a quoted attribute value".into())),
        };
        let start = self.pos;
        self.bump()?;
        let mut value = String::new();
        loop {
            match self.peek() {
                Some(c) if c == quote => {
                    self.bump()?;
                    return Ok(value);
                }
                Some('<') => return Err(self.err("`<` is not allowed in attribute values".into())),
                Some('&') => value.push(self.reference()?),
                // Attribute-value normalization for literal whitespace.
                Some('\t' | '\n') => {
                    self.bump()?;
                    value.push(' ');
                }
                Some('\r') => {
                    self.bump()?;
                    if self.peek() == Some('\n') {
                        self.bump()?;
                    }
                    value.push(' ');
                }
                Some(c) => {
                    self.bump()?;
                    value.push(c);
                }
                None => {
                    return Err(SyntaxError {
                        pos: start,
                        message: "unterminated attribute value".into(),
                    })
                }
            }
        }
    }

    fn element(&mut self, depth: usize) -> Result<Element, SyntaxError> {
        if depth > MAX_DEPTH {
            return Err(self.err("elements are nested too deeply".into()));
        }
        let pos = self.pos;
        self.expect("<")?;
        let name = self.name()?;
        let mut attrs: Vec<Attr> = Vec::new();
        loop {
            let spaced = self.skip_space()?;
            if self.starts_with("/>") {
                self.expect("/>")?;
                return Ok(Element {
                    name,
                    attrs,
                    children: Vec::new(),
                    pos,
                });
            }
            if self.starts_with(">") {
                self.expect(">")?;
                break;
            }
            if self.peek().is_none() {
                return Err(SyntaxError {
                    pos,
                    message: format!("unterminated start tag `<{name}`"),
                });
            }
            if !spaced {
                return Err(self.err("expected whitespace before attribute".into()));
            }
            let attr_pos = self.pos;
            let attr_name = self.name()?;
            self.skip_space()?;
            self.expect("=")?;
            self.skip_space()?;
            let value = self.attr_value()?;
            if attrs.iter().any(|a| a.name == attr_name) {
                return Err(SyntaxError {
                    pos: attr_pos,
                    message: format!("duplicate attribute `{attr_name}`"),
                });
            }
            attrs.push(Attr {
                name: attr_name,
                value,
                pos: attr_pos,
            });
        }

        let mut children = Vec::new();
        loop {
            if self.starts_with("</") {
                let end_pos = self.pos;
                self.expect("</")?;
                let end = self.name()?;
                self.skip_space()?;
                self.expect(">")?;
                if end != name {
                    return Err(SyntaxError {
                        pos: end_pos,
                        message: format!("end tag `</{end}>` does not match `<{name}>`"),
                    });
                }
                return Ok(Element {
                    name,
                    attrs,
                    children,
                    pos,
                });
            } else if self.starts_with("<!--") {
                self.comment()?;
            } else if self.starts_with("<![CDATA[") {
                let at = self.pos;
                self.expect("<![CDATA[")?;
                let text = self.take_until("]]>", "CDATA section")?;
                children.push(Node::Text(text, at));
            } else if self.starts_with("<?") {
                self.processing_instruction()?;
            } else if self.starts_with("<") {
                children.push(Node::Element(self.element(depth + 1)?));
            } else if self.peek().is_none() {
                return Err(SyntaxError {
                    pos,
                    message: format!("element `<{name}>` is never closed"),
                });
            } else {
                let at = self.pos;
                let mut text = String::new();
                while let Some(c) = self.peek() {
                    match c {
                        '<' => break,
                        '&' => text.push(self.reference()?),
                        _ => {
                            self.bump()?;
                            text.push(c);
                        }
                    }
                }
                children.push(Node::Text(text, at));
            }
        }
    }
}

pub(crate) fn parse_document(input: &str) -> Result<Element, SyntaxError> {
    let mut cur = Cursor {
        rest: input.strip_prefix('\u{FEFF}').unwrap_or(input),
        pos: Pos { line: 1, column: 1 },
    };
    if cur.starts_with("<?xml") && cur.rest[5..].starts_with(|c: char| is_space(c)) {
        cur.take_until("?>", "XML declaration")?;
    }
    cur.misc()?;
    if !cur.starts_with("<") || cur.starts_with("<!") {
        return Err(match cur.peek() {
            None => cur.err("document has no root element".into()),
            Some(_) => cur.err("expected the root element".into()),
        });
    }
    let root = cur.element(0)?;
    cur.misc()?;
    if cur.peek().is_some() {
        return Err(cur.err("content after the root element".into()));
    }
    Ok(root)
}

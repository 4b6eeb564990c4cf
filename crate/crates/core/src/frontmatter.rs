//! Flat `---`-delimited frontmatter.
//!
//! Supported: `key: value` pairs, indented continuation lines (folded into
//! the previous value with a single space), `[a, b]` bracket lists and
//! `- item` list lines after an empty `key:`. Nested structures are not.

use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Scalar(String),
    List(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Frontmatter {
    entries: BTreeMap<String, Value>,
}

/// Result of splitting a document into frontmatter and body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split<'a> {
    pub frontmatter: Option<Frontmatter>,
    pub body: &'a str,
    /// 1-based line number of the first body line.
    pub body_start_line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct FrontmatterError {
    pub line: usize,
    pub message: String,
}

impl Frontmatter {
    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.get(key)
    }

    pub fn scalar(&self, key: &str) -> Option<String> {
        match self.entries.get(key)? {
            Value::Scalar(s) => Some(s.clone()),
            Value::List(items) => Some(items.join(", ")),
        }
    }

    /// Reads `key` as a list; scalars are split on commas.
    pub fn list(&self, key: &str) -> Vec<String> {
        match self.entries.get(key) {
            None => Vec::new(),
            Some(Value::List(items)) => items.clone(),
            Some(Value::Scalar(s)) => split_list(s),
        }
    }

    pub fn insert(&mut self, key: impl Into<String>, value: Value) {
        self.entries.insert(key.into(), value);
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(|item| unquote(item.trim()).to_owned())
        .filter(|item| !item.is_empty())
        .collect()
}

fn unquote(s: &str) -> &str {
    let s = s.trim();
    for q in ['"', '\''] {
        if s.len() >= 2 && s.starts_with(q) && s.ends_with(q) {
            return &s[1..s.len() - 1];
        }
    }
    s
}

fn parse_value(raw: &str) -> Value {
    let raw = raw.trim();
    if let Some(inner) = raw.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        return Value::List(split_list(inner));
    }
    Value::Scalar(unquote(raw).to_owned())
}

/// Splits `text` into frontmatter and body. A document without an opening
/// `---` line has no frontmatter; an opening line without a closing one is an
/// error.
pub fn split(text: &str) -> Result<Split<'_>, FrontmatterError> {
    let mut lines = text.split_inclusive('\n');
    let first = match lines.next() {
        Some(l) => l,
        None => {
            return Ok(Split {
                frontmatter: None,
                body: text,
                body_start_line: 1,
            })
        }
    };
    if first.trim_end_matches(['\r', '\n']) != "---" {
        return Ok(Split {
            frontmatter: None,
            body: text,
            body_start_line: 1,
        });
    }

    let mut offset = first.len();
    let mut block: Vec<(usize, &str)> = Vec::new();
    let mut line_no = 1;
    for line in lines {
        line_no += 1;
        offset += line.len();
        let content = line.trim_end_matches(['\r', '\n']);
        if content == "---" {
            let frontmatter = parse_block(&block)?;
            return Ok(Split {
                frontmatter: Some(frontmatter),
                body: &text[offset..],
                body_start_line: line_no + 1,
            });
        }
        block.push((line_no, content));
    }
    Err(FrontmatterError {
        line: 1,
        message: "frontmatter opened with `---` but never closed".into(),
    })
}

fn parse_block(lines: &[(usize, &str)]) -> Result<Frontmatter, FrontmatterError> {
    let mut fm = Frontmatter::default();
    let mut current: Option<(String, String, Vec<String>)> = None;

    let flush = |fm: &mut Frontmatter, cur: Option<(String, String, Vec<String>)>| {
        if let Some((key, raw, items)) = cur {
            let value = if !items.is_empty() && raw.trim().is_empty() {
                Value::List(items)
            } else {
                parse_value(&raw)
            };
            fm.insert(key, value);
        }
    };

    for &(line_no, line) in lines {
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let indented = line.starts_with([' ', '\t']);
        let trimmed = line.trim();
        if let Some(item) = trimmed.strip_prefix("- ").or(if trimmed == "-" { Some("") } else { None }) {
            match current.as_mut() {
                Some((_, raw, items)) if raw.trim().is_empty() => {
                    let item = unquote(item).to_owned();
                    if !item.is_empty() {
                        items.push(item);
                    }
                    continue;
                }
                _ if !indented => {
                    return Err(FrontmatterError {
                        line: line_no,
                        message: "list item without a key".into(),
                    })
                }
                _ => {}
            }
        }
        if indented {
            match current.as_mut() {
                Some((_, raw, _)) => {
                    if !raw.is_empty() {
                        raw.push(' ');
                    }
                    raw.push_str(trimmed);
                    continue;
                }
                None => {
                    return Err(FrontmatterError {
                        line: line_no,
                        message: "continuation line without a key".into(),
                    })
                }
            }
        }
        let Some((key, value)) = trimmed.split_once(':') else {
            return Err(FrontmatterError {
                line: line_no,
                message: format!("expected `key: value`, found `{trimmed}`"),
            });
        };
        let key = key.trim();
        if key.is_empty() {
            return Err(FrontmatterError {
                line: line_no,
                message: "empty key".into(),
            });
        }
        flush(&mut fm, current.take());
        current = Some((key.to_owned(), value.trim().to_owned(), Vec::new()));
    }
    flush(&mut fm, current.take());
    Ok(fm)
}

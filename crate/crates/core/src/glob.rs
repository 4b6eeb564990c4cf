//! Path glob matching with `/`-separated segments.
//!
//! `*` matches any run of characters inside one segment, `?` matches exactly
//! one non-separator character and a segment consisting only of `**` matches
//! whole segments: zero or more when leading or in the middle, one or more
//! when it is the final segment (`src/Ecs/**` matches files under `src/Ecs`
//! but not `src/Ecs` itself). There is no basename-only matching: `*.cs`
//! only matches top-level files.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Segment {
    /// `**`
    AnyDepth,
    Pattern(Vec<Token>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Literal(char),
    AnyChar,
    AnyRun,
}

/// A compiled glob pattern.
#[derive(Clone, PartialEq, Eq)]
pub struct Glob {
    source: String,
    segments: Vec<Segment>,
}

impl fmt::Debug for Glob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Glob({:?})", self.source)
    }
}

impl fmt::Display for Glob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl Glob {
    pub fn new(pattern: &str) -> Self {
        let trimmed = normalize_path(pattern);
        let segments = trimmed
            .split('/')
            .filter(|s| !s.is_empty())
            .map(|s| {
                if s == "**" {
                    Segment::AnyDepth
                } else {
                    Segment::Pattern(
                        s.chars()
                            .map(|c| match c {
                                '*' => Token::AnyRun,
                                '?' => Token::AnyChar,
                                c => Token::Literal(c),
                            })
                            .collect(),
                    )
                }
            })
            .collect();
        Self {
            source: pattern.to_owned(),
            segments,
        }
    }

    pub fn as_str(&self) -> &str {
        &self.source
    }

    pub fn matches(&self, path: &str) -> bool {
        let path = normalize_path(path);
        let parts: Vec<&str> = path.split('/').filter(|s| !s.is_empty()).collect();
        if parts.is_empty() {
            return false;
        }
        match_segments(&self.segments, &parts)
    }
}

/// Convenience wrapper for one-off matches.
pub fn glob_matches(pattern: &str, path: &str) -> bool {
    Glob::new(pattern).matches(path)
}

/// Converts `\` separators to `/` and strips a leading `./` or `/`.
pub fn normalize_path(path: &str) -> String {
    let mut p = path.trim().replace('\\', "/");
    while let Some(rest) = p.strip_prefix("./") {
        p = rest.to_owned();
    }
    p.trim_start_matches('/').to_owned()
}

fn match_segments(pattern: &[Segment], parts: &[&str]) -> bool {
    match pattern.split_first() {
        None => parts.is_empty(),
        Some((Segment::AnyDepth, rest)) => {
            let min = if rest.is_empty() { 1 } else { 0 };
            (min..=parts.len()).any(|skip| match_segments(rest, &parts[skip..]))
        }
        Some((Segment::Pattern(tokens), rest)) => match parts.split_first() {
            Some((head, tail)) => {
                let chars: Vec<char> = head.chars().collect();
                match_tokens(tokens, &chars) && match_segments(rest, tail)
            }
            None => false,
        },
    }
}

fn match_tokens(tokens: &[Token], text: &[char]) -> bool {
    // Iterative wildcard matching with single backtrack point.
    let (mut t, mut s) = (0usize, 0usize);
    let mut star: Option<(usize, usize)> = None;
    while s < text.len() {
        match tokens.get(t) {
            Some(Token::Literal(c)) if *c == text[s] => {
                t += 1;
                s += 1;
            }
            Some(Token::AnyChar) => {
                t += 1;
                s += 1;
            }
            Some(Token::AnyRun) => {
                star = Some((t, s));
                t += 1;
            }
            _ => match star {
                Some((st, ss)) => {
                    t = st + 1;
                    s = ss + 1;
                    star = Some((st, ss + 1));
                }
                None => return false,
            },
        }
    }
    tokens[t..].iter().all(|tok| *tok == Token::AnyRun)
}

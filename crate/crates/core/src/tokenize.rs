//! Keyword tokenization and the bidirectional substring matcher shared by
//! retrieval and agent suggestion.

/// Tokens in this set are dropped by [`tokenize`].
pub const STOPWORDS: &[&str] = &[
    "the", "and", "for", "with", "how", "what", "when", "this", "that", "are", "you", "not", "all",
    "its",
];

/// Tokens shorter than this (in characters) are dropped.
pub const MIN_TOKEN_LEN: usize = 3;

/// Lowercases `text`, splits it on every non-alphanumeric character and drops
/// short tokens and stopwords.
///
/// First-occurrence order is preserved and duplicates are kept; use
/// [`distinct_tokens`] when a set is wanted.
pub fn tokenize(text: &str) -> Vec<String> {
    let lowered = text.to_lowercase();
    lowered
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| t.chars().count() >= MIN_TOKEN_LEN && !STOPWORDS.contains(t))
        .map(str::to_owned)
        .collect()
}

/// Tokens of `text` with duplicates removed, keeping first-occurrence order.
pub fn distinct_tokens(text: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for token in tokenize(text) {
        if !out.contains(&token) {
            out.push(token);
        }
    }
    out
}

/// True when either string contains the other.
#[inline]
pub fn substring_match(token: &str, keyword: &str) -> bool {
    keyword.contains(token) || token.contains(keyword)
}

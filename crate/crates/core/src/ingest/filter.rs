use std::fmt;

use serde::{Deserialize, Serialize};

/// Word-cleaning options.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterSettings {
    /// Lowercase surfaces before aggregation so case variants merge.
    pub case_fold: bool,
    /// Keep `'` inside words ("don't"). Off by default.
    pub allow_apostrophe: bool,
}

impl Default for FilterSettings {
    fn default() -> Self {
        Self { case_fold: true, allow_apostrophe: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    Empty,
    /// Contains a character other than the letters a-z (digits, punctuation,
    /// part-of-speech suffixes, non-Latin script).
    SymbolOrNumber,
    /// The same consonant three or more times in a row.
    TripleConsonant,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RejectReason::Empty => "empty",
            RejectReason::SymbolOrNumber => "symbol/number",
            RejectReason::TripleConsonant => "triple consonant",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(RejectReason),
}

fn is_consonant(c: char) -> bool {
    // 'y' counts as a consonant.
    c.is_ascii_lowercase() && !matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

/// Decides whether a 1-gram is kept. Depends only on `surface` and the
/// settings; letter checks always look at the lowercased form.
pub fn filter_word(surface: &str, settings: &FilterSettings) -> Verdict {
    if surface.is_empty() {
        return Verdict::Reject(RejectReason::Empty);
    }
    let folded: Vec<char> = surface.chars().map(|c| c.to_ascii_lowercase()).collect();
    if !folded.iter().all(|&c| c.is_ascii_lowercase() || (settings.allow_apostrophe && c == '\'')) {
        return Verdict::Reject(RejectReason::SymbolOrNumber);
    }
    if folded.windows(3).any(|w| is_consonant(w[0]) && w[0] == w[1] && w[1] == w[2]) {
        return Verdict::Reject(RejectReason::TripleConsonant);
    }
    Verdict::Accept
}

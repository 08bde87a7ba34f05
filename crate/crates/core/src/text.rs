//! The one tokenization rule shared by every consumer of word counts.
//!
//! Word counts feed the length filter, the short-sentence guard of the
//! language-score filter, cross-entropy normalization, and corpus
//! statistics. All of them must agree, so they all call into here.

/// Splits on runs of Unicode whitespace; empty tokens never appear.
pub fn split_words(text: &str) -> impl Iterator<Item = &str> {
    text.split_whitespace()
}

/// Number of whitespace-separated words.
pub fn word_count(text: &str) -> usize {
    split_words(text).count()
}

/// Number of Unicode scalar values, not bytes.
pub fn char_count(text: &str) -> usize {
    text.chars().count()
}

//! Filter verdicts and machine-readable drop reasons.
//!
//! Every filter in the pipeline returns a [`Verdict`]; drops carry a
//! [`DropReason`] whose stable code keys the per-stage removal histograms,
//! so removal counts are reproducible from a report alone.

use std::fmt;

use crate::model::{DocKey, Side};

/// Outcome of applying one filter to one unit (document or pair).
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Keep,
    Drop(DropReason),
}

impl Verdict {
    pub fn is_keep(&self) -> bool {
        matches!(self, Verdict::Keep)
    }

    pub fn reason(&self) -> Option<&DropReason> {
        match self {
            Verdict::Keep => None,
            Verdict::Drop(reason) => Some(reason),
        }
    }
}

/// Why a unit was removed. `code` is stable across releases; `Display`
/// adds the per-unit detail.
#[derive(Debug, Clone, PartialEq)]
pub enum DropReason {
    /// A document side classified as an unexpected language.
    DocLanguage { side: Side, detected: String },
    /// The Czech side of a document contains no Czech diacritics.
    DocNoDiacritics,
    /// An earlier document had identical content.
    DocDuplicate { first: DocKey },
    /// A side exceeds the word limit.
    LengthWords { side: Side, words: usize },
    /// A side exceeds the character limit.
    LengthChars { side: Side, chars: usize },
    /// Long sentence with a low language score on either side.
    LangScore { cs_score: f64, en_score: f64 },
    /// Adequacy score below the removal threshold.
    LowAdq { adq: f64 },
    /// Raw classifier probability below the strict pre-filter threshold.
    PrefilterLang { side: Side, prob: f64 },
    /// Pair text present in the subtraction reference.
    Subtracted,
}

impl DropReason {
    pub fn code(&self) -> &'static str {
        match self {
            DropReason::DocLanguage { .. } => "doc_language",
            DropReason::DocNoDiacritics => "doc_no_diacritics",
            DropReason::DocDuplicate { .. } => "doc_duplicate",
            DropReason::LengthWords { .. } => "length_words",
            DropReason::LengthChars { .. } => "length_chars",
            DropReason::LangScore { .. } => "lang_score",
            DropReason::LowAdq { .. } => "low_adq",
            DropReason::PrefilterLang { .. } => "prefilter_lang",
            DropReason::Subtracted => "subtracted",
        }
    }
}

impl fmt::Display for DropReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DropReason::DocLanguage { side, detected } => {
                write!(f, "doc_language:{side}_side={detected}")
            }
            DropReason::DocNoDiacritics => write!(f, "doc_no_diacritics"),
            DropReason::DocDuplicate { first } => write!(f, "doc_duplicate:first={first}"),
            DropReason::LengthWords { side, words } => {
                write!(f, "length_words:{side}_words={words}")
            }
            DropReason::LengthChars { side, chars } => {
                write!(f, "length_chars:{side}_chars={chars}")
            }
            DropReason::LangScore { cs_score, en_score } => {
                write!(f, "lang_score:cs={cs_score:.6},en={en_score:.6}")
            }
            DropReason::LowAdq { adq } => write!(f, "low_adq:adq={adq:.6}"),
            DropReason::PrefilterLang { side, prob } => {
                write!(f, "prefilter_lang:{side}_prob={prob:.6}")
            }
            DropReason::Subtracted => write!(f, "subtracted"),
        }
    }
}

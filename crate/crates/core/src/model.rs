//! Domain types shared by every stage of the pipeline.
//!
//! All types here are immutable value objects after construction and are
//! safe to share and send between threads. Invariants are enforced at
//! construction; downstream code never re-validates.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("malformed pair id {text:?}: {reason}")]
    MalformedId { text: String, reason: String },
    #[error("score {value} outside [0, 1]")]
    ScoreOutOfRange { value: f64 },
    #[error("{side} text is empty")]
    EmptyText { side: Side },
    #[error("{side} text contains a tab or line break")]
    ForbiddenChar { side: Side },
    #[error("document has no sentence pairs")]
    EmptyDocument,
    #[error("pair {id} does not belong to document {key}")]
    MixedDocumentKey { id: PairId, key: DocKey },
    #[error("sentence indices not strictly increasing at {id}")]
    NonIncreasingSent { id: PairId },
    #[error("cross-entropy {value} must be finite and non-negative")]
    InvalidCrossEntropy { value: f64 },
    #[error("language distribution is empty")]
    EmptyDistribution,
    #[error("language probabilities sum to {sum}, expected 1")]
    UnnormalizedDistribution { sum: f64 },
}

/// Which side of a sentence pair, for error reporting and filter reasons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Cs,
    En,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Cs => "cs",
            Side::En => "en",
        })
    }
}

fn valid_source(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' || c == '.')
}

fn valid_doc(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

/// Hierarchical identifier of one sentence pair: data source, document,
/// file within the document, and sentence index within the file.
///
/// Canonical string form is `<source>-<doc>-f<file>-s<sent>`, e.g.
/// `paracrawl-b16598886-f0-s1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairId {
    source: String,
    doc: String,
    file: u64,
    sent: u64,
}

impl PairId {
    pub fn new(
        source: impl Into<String>,
        doc: impl Into<String>,
        file: u64,
        sent: u64,
    ) -> Result<Self, ModelError> {
        let source = source.into();
        let doc = doc.into();
        let malformed = |reason: &str| ModelError::MalformedId {
            text: format!("{source}-{doc}-f{file}-s{sent}"),
            reason: reason.to_string(),
        };
        if !valid_source(&source) {
            return Err(malformed("source must match [a-z0-9_.]+"));
        }
        if !valid_doc(&doc) {
            return Err(malformed("doc must match [A-Za-z0-9_.]+"));
        }
        if sent == 0 {
            return Err(malformed("sentence index starts at 1"));
        }
        Ok(PairId { source, doc, file, sent })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn doc(&self) -> &str {
        &self.doc
    }

    pub fn file(&self) -> u64 {
        self.file
    }

    pub fn sent(&self) -> u64 {
        self.sent
    }

    pub fn doc_key(&self) -> DocKey {
        DocKey {
            source: self.source.clone(),
            doc: self.doc.clone(),
            file: self.file,
        }
    }

    /// Same id under a different source name.
    pub fn with_source(&self, source: &str) -> Result<Self, ModelError> {
        PairId::new(source, self.doc.clone(), self.file, self.sent)
    }
}

impl fmt::Display for PairId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}-f{}-s{}", self.source, self.doc, self.file, self.sent)
    }
}

impl FromStr for PairId {
    type Err = ModelError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        parse_pair_id(text)
    }
}

/// Parses the dash-separated id grammar right to left: the last component
/// must be `s<digits>`, the one before it `f<digits>`, the first component
/// is the source, and everything in between is the document name. A
/// document name that itself contains `-` therefore fails validation.
pub fn parse_pair_id(text: &str) -> Result<PairId, ModelError> {
    let malformed = |reason: String| ModelError::MalformedId { text: text.to_string(), reason };
    let parts: Vec<&str> = text.split('-').collect();
    if parts.len() < 4 {
        return Err(malformed(format!(
            "expected <source>-<doc>-f<file>-s<sent>, got {} components",
            parts.len()
        )));
    }
    let sent_part = parts[parts.len() - 1];
    let file_part = parts[parts.len() - 2];
    let sent_digits = sent_part
        .strip_prefix('s')
        .ok_or_else(|| malformed(format!("last component {sent_part:?} must be s<digits>")))?;
    let file_digits = file_part
        .strip_prefix('f')
        .ok_or_else(|| malformed(format!("component {file_part:?} must be f<digits>")))?;
    let sent = parse_index(sent_digits).ok_or_else(|| malformed(format!("bad sentence index {sent_digits:?}")))?;
    let file = parse_index(file_digits).ok_or_else(|| malformed(format!("bad file index {file_digits:?}")))?;
    let source = parts[0];
    let doc = parts[1..parts.len() - 2].join("-");
    PairId::new(source, doc, file, sent)
}

fn parse_index(digits: &str) -> Option<u64> {
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

/// Canonical string form; [`parse_pair_id`] inverts it exactly.
pub fn format_pair_id(id: &PairId) -> String {
    id.to_string()
}

/// Identity of a document: `(source, doc, file)`. Within one source the
/// document id reads `<doc>-f<file>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DocKey {
    source: String,
    doc: String,
    file: u64,
}

impl DocKey {
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn doc(&self) -> &str {
        &self.doc
    }

    pub fn file(&self) -> u64 {
        self.file
    }
}

impl fmt::Display for DocKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}-f{}", self.source, self.doc, self.file)
    }
}

fn check_unit(value: f64) -> Result<f64, ModelError> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(ModelError::ScoreOutOfRange { value })
    }
}

/// The three per-pair quality scores, each in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreTriple {
    adq: f64,
    cs_lang: f64,
    en_lang: f64,
}

impl ScoreTriple {
    /// Synthetic pairs carry all-1 scores.
    pub const SYNTHETIC: ScoreTriple = ScoreTriple { adq: 1.0, cs_lang: 1.0, en_lang: 1.0 };

    pub fn new(adq: f64, cs_lang: f64, en_lang: f64) -> Result<Self, ModelError> {
        Ok(ScoreTriple {
            adq: check_unit(adq)?,
            cs_lang: check_unit(cs_lang)?,
            en_lang: check_unit(en_lang)?,
        })
    }

    pub fn adq(&self) -> f64 {
        self.adq
    }

    pub fn cs_lang(&self) -> f64 {
        self.cs_lang
    }

    pub fn en_lang(&self) -> f64 {
        self.en_lang
    }
}

/// Scores of a pair somewhere along the pipeline: any subset may be filled.
///
/// Scoring stages fill one field at a time (language scores and the
/// adequacy score come from different scorers), so partially scored pairs
/// exist in memory. Serialization requires the complete triple.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PairScores {
    adq: Option<f64>,
    cs_lang: Option<f64>,
    en_lang: Option<f64>,
}

impl PairScores {
    pub fn adq(&self) -> Option<f64> {
        self.adq
    }

    pub fn cs_lang(&self) -> Option<f64> {
        self.cs_lang
    }

    pub fn en_lang(&self) -> Option<f64> {
        self.en_lang
    }

    pub fn set_adq(&mut self, value: f64) -> Result<(), ModelError> {
        self.adq = Some(check_unit(value)?);
        Ok(())
    }

    pub fn set_lang(&mut self, cs_lang: f64, en_lang: f64) -> Result<(), ModelError> {
        self.cs_lang = Some(check_unit(cs_lang)?);
        self.en_lang = Some(check_unit(en_lang)?);
        Ok(())
    }

    /// The complete triple, if every field is filled.
    pub fn triple(&self) -> Option<ScoreTriple> {
        Some(ScoreTriple {
            adq: self.adq?,
            cs_lang: self.cs_lang?,
            en_lang: self.en_lang?,
        })
    }
}

impl From<ScoreTriple> for PairScores {
    fn from(t: ScoreTriple) -> Self {
        PairScores {
            adq: Some(t.adq),
            cs_lang: Some(t.cs_lang),
            en_lang: Some(t.en_lang),
        }
    }
}

/// One aligned Czech/English sentence pair, the atomic corpus unit.
///
/// Texts are non-empty and contain no tab or line break, so a pair always
/// serializes to exactly one well-formed line.
#[derive(Debug, Clone, PartialEq)]
pub struct SentencePair {
    id: PairId,
    cs_text: String,
    en_text: String,
    scores: PairScores,
}

fn check_text(text: String, side: Side) -> Result<String, ModelError> {
    if text.is_empty() {
        return Err(ModelError::EmptyText { side });
    }
    if text.contains(['\t', '\n', '\r']) {
        return Err(ModelError::ForbiddenChar { side });
    }
    Ok(text)
}

impl SentencePair {
    pub fn new(
        id: PairId,
        cs_text: impl Into<String>,
        en_text: impl Into<String>,
    ) -> Result<Self, ModelError> {
        Ok(SentencePair {
            id,
            cs_text: check_text(cs_text.into(), Side::Cs)?,
            en_text: check_text(en_text.into(), Side::En)?,
            scores: PairScores::default(),
        })
    }

    pub fn with_scores(
        id: PairId,
        cs_text: impl Into<String>,
        en_text: impl Into<String>,
        scores: ScoreTriple,
    ) -> Result<Self, ModelError> {
        let mut pair = SentencePair::new(id, cs_text, en_text)?;
        pair.scores = scores.into();
        Ok(pair)
    }

    pub fn id(&self) -> &PairId {
        &self.id
    }

    pub fn text(&self, side: Side) -> &str {
        match side {
            Side::Cs => &self.cs_text,
            Side::En => &self.en_text,
        }
    }

    pub fn cs_text(&self) -> &str {
        &self.cs_text
    }

    pub fn en_text(&self) -> &str {
        &self.en_text
    }

    pub fn scores(&self) -> &PairScores {
        &self.scores
    }

    pub fn scores_mut(&mut self) -> &mut PairScores {
        &mut self.scores
    }

    pub fn set_scores(&mut self, scores: ScoreTriple) {
        self.scores = scores.into();
    }

    pub fn set_id(&mut self, id: PairId) {
        self.id = id;
    }
}

/// An ordered, non-empty run of sentence pairs sharing one document key.
///
/// Construction enforces the shared key and strictly increasing sentence
/// indices; segmentation caps document length, the type itself does not,
/// so re-reading corpora with longer synthetic documents always succeeds.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    key: DocKey,
    pairs: Vec<SentencePair>,
}

impl Document {
    pub fn new(pairs: Vec<SentencePair>) -> Result<Self, ModelError> {
        let key = pairs.first().ok_or(ModelError::EmptyDocument)?.id().doc_key();
        let mut prev_sent = 0u64;
        for pair in &pairs {
            if pair.id().doc_key() != key {
                return Err(ModelError::MixedDocumentKey { id: pair.id().clone(), key });
            }
            if pair.id().sent() <= prev_sent {
                return Err(ModelError::NonIncreasingSent { id: pair.id().clone() });
            }
            prev_sent = pair.id().sent();
        }
        Ok(Document { key, pairs })
    }

    pub fn key(&self) -> &DocKey {
        &self.key
    }

    pub fn pairs(&self) -> &[SentencePair] {
        &self.pairs
    }

    pub fn pairs_mut(&mut self) -> &mut [SentencePair] {
        &mut self.pairs
    }

    pub fn into_pairs(self) -> Vec<SentencePair> {
        self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    /// Side texts joined by single spaces, the input to document-level
    /// language classification.
    pub fn joined_side(&self, side: Side) -> String {
        let mut out = String::new();
        for pair in &self.pairs {
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(pair.text(side));
        }
        out
    }
}

/// The two word-normalized conditional cross-entropies of a pair, in nats
/// per target-side word.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossEntropyPair {
    h_a: f64,
    h_b: f64,
}

impl CrossEntropyPair {
    pub fn new(h_a: f64, h_b: f64) -> Result<Self, ModelError> {
        for value in [h_a, h_b] {
            if !value.is_finite() || value < 0.0 {
                return Err(ModelError::InvalidCrossEntropy { value });
            }
        }
        Ok(CrossEntropyPair { h_a, h_b })
    }

    /// −log P(en|cs), nats per English word.
    pub fn h_a(&self) -> f64 {
        self.h_a
    }

    /// −log P(cs|en), nats per Czech word.
    pub fn h_b(&self) -> f64 {
        self.h_b
    }
}

/// Per-language probability assignment for one text.
#[derive(Debug, Clone, PartialEq)]
pub struct LangDistribution {
    entries: BTreeMap<String, f64>,
}

impl LangDistribution {
    pub fn new(entries: BTreeMap<String, f64>) -> Result<Self, ModelError> {
        if entries.is_empty() {
            return Err(ModelError::EmptyDistribution);
        }
        let mut sum = 0.0;
        for &p in entries.values() {
            check_unit(p)?;
            sum += p;
        }
        if (sum - 1.0).abs() > 1e-9 {
            return Err(ModelError::UnnormalizedDistribution { sum });
        }
        Ok(LangDistribution { entries })
    }

    /// Probability of `lang`; absent languages have probability 0.
    pub fn prob(&self, lang: &str) -> f64 {
        self.entries.get(lang).copied().unwrap_or(0.0)
    }

    /// The most probable language; ties go to the lexicographically
    /// smallest code.
    pub fn argmax(&self) -> (&str, f64) {
        let mut best: Option<(&str, f64)> = None;
        for (lang, &p) in &self.entries {
            match best {
                Some((_, bp)) if p <= bp => {}
                _ => best = Some((lang, p)),
            }
        }
        best.expect("distribution is non-empty")
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn source_strategy() -> impl Strategy<Value = String> {
        "[a-z0-9_.]{1,12}"
    }

    fn doc_strategy() -> impl Strategy<Value = String> {
        "[A-Za-z0-9_.]{1,16}"
    }

    proptest! {
        #[test]
        fn pair_id_round_trips(
            source in source_strategy(),
            doc in doc_strategy(),
            file in 0u64..10_000,
            sent in 1u64..10_000,
        ) {
            let id = PairId::new(source, doc, file, sent).unwrap();
            let text = format_pair_id(&id);
            prop_assert_eq!(parse_pair_id(&text).unwrap(), id);
        }

        #[test]
        fn canonical_strings_round_trip(
            source in source_strategy(),
            doc in doc_strategy(),
            file in 0u64..10_000,
            sent in 1u64..10_000,
        ) {
            let text = format!("{source}-{doc}-f{file}-s{sent}");
            let id = parse_pair_id(&text).unwrap();
            prop_assert_eq!(format_pair_id(&id), text);
        }
    }
}

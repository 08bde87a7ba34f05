//! Document-level filtering: language check, diacritics check, exact
//! deduplication.
//!
//! Document filters are all-or-nothing: they keep every pair of a
//! document or remove every pair, never individual sentences. The
//! language and diacritics checks are pure per-document functions; dedup
//! keeps a digest of every document seen so far and must consume the
//! stream in order, since the first occurrence survives.

use std::collections::{BTreeSet, HashMap};

use sha2::{Digest, Sha256};

use crate::langid::{side_language, LangIdError, LanguageProfile};
use crate::model::{DocKey, Document, Side};
use crate::verdict::{DropReason, Verdict};

/// The accented letters of Czech orthography, both cases.
pub const CZECH_DIACRITICS: &str = "áčďéěíňóřšťúůýžÁČĎÉĚÍŇÓŘŠŤÚŮÝŽ";

/// Configuration of the document-level filters.
#[derive(Debug, Clone, PartialEq)]
pub struct DocFilterConfig {
    pub expected_cs: String,
    pub expected_en: String,
    pub diacritics_set: BTreeSet<char>,
}

impl Default for DocFilterConfig {
    fn default() -> Self {
        DocFilterConfig {
            expected_cs: "cs".to_string(),
            expected_en: "en".to_string(),
            diacritics_set: CZECH_DIACRITICS.chars().collect(),
        }
    }
}

/// Drops the document when either side classifies as a language other
/// than the expected one.
pub fn filter_doc_language(
    doc: &Document,
    profiles: &[LanguageProfile],
    cfg: &DocFilterConfig,
) -> Result<Verdict, LangIdError> {
    let cs_detected = side_language(doc, Side::Cs, profiles)?;
    if cs_detected != cfg.expected_cs {
        return Ok(Verdict::Drop(DropReason::DocLanguage { side: Side::Cs, detected: cs_detected }));
    }
    let en_detected = side_language(doc, Side::En, profiles)?;
    if en_detected != cfg.expected_en {
        return Ok(Verdict::Drop(DropReason::DocLanguage { side: Side::En, detected: en_detected }));
    }
    Ok(Verdict::Keep)
}

/// Drops the document when its whole Czech side contains no accented
/// Czech character. The English side is never inspected.
pub fn filter_doc_diacritics(doc: &Document, cfg: &DocFilterConfig) -> Verdict {
    let any_accent = doc
        .pairs()
        .iter()
        .flat_map(|pair| pair.cs_text().chars())
        .any(|c| cfg.diacritics_set.contains(&c));
    if any_accent {
        Verdict::Keep
    } else {
        Verdict::Drop(DropReason::DocNoDiacritics)
    }
}

/// Content digest over the ordered (cs, en) texts of a document, ids
/// ignored. Texts are length-prefixed so distinct pair sequences cannot
/// collide by concatenation.
pub fn content_digest(doc: &Document) -> [u8; 32] {
    let mut hasher = Sha256::new();
    for pair in doc.pairs() {
        for text in [pair.cs_text(), pair.en_text()] {
            hasher.update((text.len() as u64).to_le_bytes());
            hasher.update(text.as_bytes());
        }
    }
    hasher.finalize().into()
}

/// Streaming exact deduplication state: the first document with a given
/// content survives, later identical ones drop.
///
/// Only digests and first-occurrence keys stay in memory, so a corpus
/// never needs to fit in RAM; spilling the seen-set to disk is out of
/// scope. A drop requires a full 256-bit digest match, which for SHA-256
/// does not occur for distinct contents in practice.
#[derive(Debug, Default)]
pub struct DocDeduper {
    seen: HashMap<[u8; 32], DocKey>,
}

impl DocDeduper {
    pub fn new() -> Self {
        DocDeduper::default()
    }

    /// Verdict for the next document in stream order; first occurrences
    /// are recorded as kept.
    pub fn check(&mut self, doc: &Document) -> Verdict {
        self.check_digest(content_digest(doc), doc.key())
    }

    /// Same as [`DocDeduper::check`] for a digest computed elsewhere
    /// (e.g. on a worker thread).
    pub fn check_digest(&mut self, digest: [u8; 32], key: &DocKey) -> Verdict {
        match self.seen.get(&digest) {
            Some(first) => Verdict::Drop(DropReason::DocDuplicate { first: first.clone() }),
            None => {
                self.seen.insert(digest, key.clone());
                Verdict::Keep
            }
        }
    }

    pub fn len(&self) -> usize {
        self.seen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seen.is_empty()
    }
}

/// Convenience wrapper: deduplicates an in-order document stream.
pub fn dedup_documents<I>(docs: I) -> impl Iterator<Item = Document>
where
    I: IntoIterator<Item = Document>,
{
    let mut deduper = DocDeduper::new();
    docs.into_iter().filter(move |doc| deduper.check(doc).is_keep())
}

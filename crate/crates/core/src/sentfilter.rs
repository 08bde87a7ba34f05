//! Sentence-level filtering: length limits, the language-score rule, the
//! adequacy threshold, the strict raw-probability pre-filter, and corpus
//! subtraction.
//!
//! Each filter is a pure per-pair predicate: filtering a concatenation of
//! streams equals concatenating filtered streams, and the surviving set
//! does not depend on the order filters are composed in.

use std::collections::HashSet;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::langid::{classify, LangIdError, LangScoreRule, LanguageProfile};
use crate::model::{Document, PairId, SentencePair, Side};
use crate::text::{char_count, word_count};
use crate::verdict::{DropReason, Verdict};

#[derive(Debug, Error)]
pub enum SentFilterError {
    #[error("pair {id} has no language scores")]
    UnscoredLang { id: PairId },
    #[error("pair {id} has no adequacy score")]
    UnscoredAdq { id: PairId },
}

/// Thresholds of the sentence-level filters.
#[derive(Debug, Clone, PartialEq)]
pub struct SentFilterConfig {
    /// Drop sentences longer than this many space-separated words.
    pub max_words: usize,
    /// Drop sentences longer than this many Unicode scalar values.
    pub max_chars: usize,
    pub lang_rule: LangScoreRule,
    /// Drop pairs with adq_score strictly below this.
    pub adq_threshold: f64,
    /// Strict pre-filter: minimum raw classifier probability of the
    /// expected language on each side.
    pub prefilter_min_prob: f64,
}

impl Default for SentFilterConfig {
    fn default() -> Self {
        SentFilterConfig {
            max_words: 200,
            max_chars: 1600,
            lang_rule: LangScoreRule::default(),
            adq_threshold: 0.02,
            prefilter_min_prob: 0.5,
        }
    }
}

/// Drops a pair when either side is longer than `max_words` words or
/// `max_chars` characters; sides exactly at a limit are kept.
pub fn filter_length(pair: &SentencePair, cfg: &SentFilterConfig) -> Verdict {
    for side in [Side::Cs, Side::En] {
        let words = word_count(pair.text(side));
        if words > cfg.max_words {
            return Verdict::Drop(DropReason::LengthWords { side, words });
        }
        let chars = char_count(pair.text(side));
        if chars > cfg.max_chars {
            return Verdict::Drop(DropReason::LengthChars { side, chars });
        }
    }
    Verdict::Keep
}

/// Drops a pair when it has more than `min_words` words on either side
/// and either language score is strictly below `min_score`. Short
/// sentences are exempt: the classifier is unreliable on them.
pub fn filter_lang_score(
    pair: &SentencePair,
    cfg: &SentFilterConfig,
) -> Result<Verdict, SentFilterError> {
    let (Some(cs_score), Some(en_score)) = (pair.scores().cs_lang(), pair.scores().en_lang())
    else {
        return Err(SentFilterError::UnscoredLang { id: pair.id().clone() });
    };
    let long_enough = word_count(pair.cs_text()) > cfg.lang_rule.min_words
        || word_count(pair.en_text()) > cfg.lang_rule.min_words;
    let low_score = cs_score < cfg.lang_rule.min_score || en_score < cfg.lang_rule.min_score;
    if long_enough && low_score {
        Ok(Verdict::Drop(DropReason::LangScore { cs_score, en_score }))
    } else {
        Ok(Verdict::Keep)
    }
}

/// Drops a pair with adq_score strictly below the threshold. The
/// threshold is overridable to sweep stricter corpora out of the same
/// scored file.
pub fn filter_adq(pair: &SentencePair, cfg: &SentFilterConfig) -> Result<Verdict, SentFilterError> {
    let Some(adq) = pair.scores().adq() else {
        return Err(SentFilterError::UnscoredAdq { id: pair.id().clone() });
    };
    if adq < cfg.adq_threshold {
        Ok(Verdict::Drop(DropReason::LowAdq { adq }))
    } else {
        Ok(Verdict::Keep)
    }
}

/// Strict pre-filter: drops a pair when the classifier's raw probability
/// of the expected language falls below `prefilter_min_prob` on either
/// side. No length guard and no rescaling — stricter than the
/// language-score rule applied to the completed corpus.
pub fn prefilter_strict(
    pair: &SentencePair,
    profiles: &[LanguageProfile],
    cfg: &SentFilterConfig,
) -> Result<Verdict, LangIdError> {
    for (side, lang) in [(Side::Cs, "cs"), (Side::En, "en")] {
        let prob = classify(pair.text(side), profiles)?.prob(lang);
        if prob < cfg.prefilter_min_prob {
            return Ok(Verdict::Drop(DropReason::PrefilterLang { side, prob }));
        }
    }
    Ok(Verdict::Keep)
}

fn pair_digest(cs_text: &str, en_text: &str) -> [u8; 32] {
    let mut hasher = Sha256::new();
    for text in [cs_text, en_text] {
        hasher.update((text.len() as u64).to_le_bytes());
        hasher.update(text.as_bytes());
    }
    hasher.finalize().into()
}

/// Reference set for corpus subtraction: content keys of every reference
/// pair, ids ignored.
#[derive(Debug, Default, Clone)]
pub struct SubtractSet {
    digests: HashSet<[u8; 32]>,
}

impl SubtractSet {
    pub fn new() -> Self {
        SubtractSet::default()
    }

    pub fn insert(&mut self, pair: &SentencePair) {
        self.digests.insert(pair_digest(pair.cs_text(), pair.en_text()));
    }

    pub fn from_documents<'a, I>(docs: I) -> Self
    where
        I: IntoIterator<Item = &'a Document>,
    {
        let mut set = SubtractSet::new();
        for doc in docs {
            for pair in doc.pairs() {
                set.insert(pair);
            }
        }
        set
    }

    pub fn contains(&self, pair: &SentencePair) -> bool {
        self.digests.contains(&pair_digest(pair.cs_text(), pair.en_text()))
    }

    pub fn len(&self) -> usize {
        self.digests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digests.is_empty()
    }
}

/// Verdict form of subtraction, for use as a pipeline stage.
pub fn filter_subtract(pair: &SentencePair, reference: &SubtractSet) -> Verdict {
    if reference.contains(pair) {
        Verdict::Drop(DropReason::Subtracted)
    } else {
        Verdict::Keep
    }
}

/// Drops every pair whose (cs, en) texts appear verbatim in the
/// reference; order is preserved.
pub fn subtract_corpus<I>(
    pairs: I,
    reference: &SubtractSet,
) -> impl Iterator<Item = SentencePair> + '_
where
    I: IntoIterator<Item = SentencePair>,
    I::IntoIter: 'static,
{
    pairs.into_iter().filter(move |pair| !reference.contains(pair))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::langid::train_profile;
    use crate::model::{parse_pair_id, ScoreTriple};

    fn pair(cs: &str, en: &str) -> SentencePair {
        SentencePair::new(parse_pair_id("t-d0-f0-s1").unwrap(), cs, en).unwrap()
    }

    fn scored(cs: &str, en: &str, adq: f64, cs_lang: f64, en_lang: f64) -> SentencePair {
        SentencePair::with_scores(
            parse_pair_id("t-d0-f0-s1").unwrap(),
            cs,
            en,
            ScoreTriple::new(adq, cs_lang, en_lang).unwrap(),
        )
        .unwrap()
    }

    fn words(n: usize) -> String {
        vec!["slovo"; n].join(" ")
    }

    #[test]
    fn word_limit_is_strictly_greater_than() {
        let cfg = SentFilterConfig::default();
        let over = pair("krátká věta", &words(201));
        match filter_length(&over, &cfg) {
            Verdict::Drop(DropReason::LengthWords { side: Side::En, words }) => {
                assert_eq!(words, 201);
            }
            other => panic!("unexpected verdict {other:?}"),
        }
        let at_limit = pair(&words(200), &words(200));
        assert!(filter_length(&at_limit, &cfg).is_keep());
    }

    #[test]
    fn char_limit_counts_scalar_values() {
        let cfg = SentFilterConfig::default();
        // 5 words, over 1600 characters: the character branch fires
        let long_word = "ž".repeat(1597);
        let over = pair(&format!("a b c d {long_word}"), "short");
        match filter_length(&over, &cfg) {
            Verdict::Drop(DropReason::LengthChars { side: Side::Cs, chars }) => {
                assert_eq!(chars, 1605);
            }
            other => panic!("unexpected verdict {other:?}"),
        }
        let exactly = pair(&"a".repeat(1600), "short");
        assert!(filter_length(&exactly, &cfg).is_keep());
    }

    #[test]
    fn low_lang_score_on_long_sentences_drops() {
        let cfg = SentFilterConfig::default();
        let p = scored(&words(12), &words(12), 1.0, 0.4, 1.0);
        assert!(matches!(
            filter_lang_score(&p, &cfg).unwrap(),
            Verdict::Drop(DropReason::LangScore { .. })
        ));
    }

    #[test]
    fn short_sentences_are_exempt_from_the_lang_rule() {
        let cfg = SentFilterConfig::default();
        let p = scored(&words(5), &words(5), 1.0, 0.1, 0.1);
        assert!(filter_lang_score(&p, &cfg).unwrap().is_keep());
        // exactly ten words is not "more than ten"
        let boundary = scored(&words(10), &words(10), 1.0, 0.1, 0.1);
        assert!(filter_lang_score(&boundary, &cfg).unwrap().is_keep());
        // one long side is enough to lift the exemption
        let one_long = scored(&words(11), &words(5), 1.0, 0.1, 0.1);
        assert!(!filter_lang_score(&one_long, &cfg).unwrap().is_keep());
    }

    #[test]
    fn lang_score_boundary_is_strictly_lower_than() {
        let cfg = SentFilterConfig::default();
        let p = scored(&words(12), &words(12), 1.0, 1.0, 0.5);
        assert!(filter_lang_score(&p, &cfg).unwrap().is_keep());
    }

    #[test]
    fn lang_rule_requires_scores() {
        let cfg = SentFilterConfig::default();
        let p = pair("a", "b");
        assert!(matches!(filter_lang_score(&p, &cfg), Err(SentFilterError::UnscoredLang { .. })));
    }

    #[test]
    fn adq_below_threshold_drops() {
        let cfg = SentFilterConfig::default();
        let low = scored("a", "b", (-4.0f64).exp(), 1.0, 1.0);
        assert!(matches!(
            filter_adq(&low, &cfg).unwrap(),
            Verdict::Drop(DropReason::LowAdq { .. })
        ));
    }

    #[test]
    fn adq_threshold_is_strictly_less_than() {
        let cfg = SentFilterConfig::default();
        let boundary = scored("a", "b", 0.02, 1.0, 1.0);
        assert!(filter_adq(&boundary, &cfg).unwrap().is_keep());
    }

    #[test]
    fn adq_threshold_is_overridable_for_sweeps() {
        let cfg = SentFilterConfig { adq_threshold: 0.25, ..SentFilterConfig::default() };
        let p = scored("a", "b", 0.1, 1.0, 1.0);
        assert!(!filter_adq(&p, &cfg).unwrap().is_keep());
    }

    #[test]
    fn adq_filter_requires_a_score() {
        let cfg = SentFilterConfig::default();
        assert!(matches!(
            filter_adq(&pair("a", "b"), &cfg),
            Err(SentFilterError::UnscoredAdq { .. })
        ));
    }

    fn prefilter_profiles() -> Vec<LanguageProfile> {
        let cs = "příliš žluťoučký kůň úpěl ďábelské ódy děti si hrály na zahradě počasí \
                  bude zítra oblačné vláda schválila nový zákon o ochraně přírody "
            .repeat(8);
        let en = "the quick brown fox jumps over the lazy dog children played in the garden \
                  the weather tomorrow will be cloudy the government approved a new law "
            .repeat(8);
        let sk = "vláda dnes schválila nový zákon o ochrane prírody deti sa hrali na záhrade \
                  celé popoludnie počasie bude zajtra oblačné miestami prehánky vodiči musia \
                  dávať pozor na chodcov ktorí prechádzajú cez cestu "
            .repeat(8);
        vec![
            train_profile(&[cs.as_str()], "cs").unwrap(),
            train_profile(&[en.as_str()], "en").unwrap(),
            train_profile(&[sk.as_str()], "sk").unwrap(),
        ]
    }

    #[test]
    fn prefilter_drops_slovak_czech_side() {
        let cfg = SentFilterConfig::default();
        let slovak = pair(
            "deti sa hrali na záhrade celé popoludnie a počasie bude zajtra oblačné",
            "children played in the garden all afternoon",
        );
        let verdict = prefilter_strict(&slovak, &prefilter_profiles(), &cfg).unwrap();
        match verdict {
            Verdict::Drop(DropReason::PrefilterLang { side: Side::Cs, prob }) => {
                assert!(prob < 0.5, "p(cs) = {prob}");
            }
            other => panic!("unexpected verdict {other:?}"),
        }
    }

    #[test]
    fn prefilter_keeps_clean_pairs() {
        let cfg = SentFilterConfig::default();
        let clean = pair(
            "děti si hrály na zahradě a počasí bude zítra oblačné",
            "children played in the garden and the weather tomorrow will be cloudy",
        );
        assert!(prefilter_strict(&clean, &prefilter_profiles(), &cfg).unwrap().is_keep());
    }

    #[test]
    fn prefilter_with_zero_threshold_keeps_everything() {
        let cfg = SentFilterConfig { prefilter_min_prob: 0.0, ..SentFilterConfig::default() };
        let slovak = pair("deti sa hrali na záhrade celé popoludnie", "whatever text this is");
        assert!(prefilter_strict(&slovak, &prefilter_profiles(), &cfg).unwrap().is_keep());
    }

    #[test]
    fn subtraction_drops_verbatim_pairs_only() {
        let reference: Vec<SentencePair> =
            vec![pair("ahoj světe", "hello world"), pair("dobrý den", "good day")];
        let mut set = SubtractSet::new();
        for p in &reference {
            set.insert(p);
        }
        let input = vec![
            pair("ahoj světe", "hello world"), // verbatim -> dropped
            pair("ahoj svĚte", "hello world"), // one char differs -> kept
            pair("na shledanou", "goodbye"),   // unrelated -> kept
        ];
        let out: Vec<SentencePair> = subtract_corpus(input, &set).collect();
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].cs_text(), "ahoj svĚte");
    }

    #[test]
    fn self_subtraction_empties_the_stream() {
        let pairs = vec![pair("a", "x"), pair("b", "y")];
        let mut set = SubtractSet::new();
        for p in &pairs {
            set.insert(p);
        }
        assert_eq!(subtract_corpus(pairs, &set).count(), 0);
    }
}

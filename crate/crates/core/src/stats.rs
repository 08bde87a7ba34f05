//! Corpus statistics and per-stage removal reporting.
//!
//! Word counts use the shared whitespace splitter, so the numbers here
//! agree with the length filter and with cross-entropy normalization.
//! Stage ledgers conserve pairs: what enters a stage either survives into
//! the next one or shows up in that stage's drop histogram.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{Document, PairId, SentencePair};
use crate::text::word_count;
use crate::verdict::DropReason;

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("pair {id} has no adequacy score")]
    UnscoredPair { id: PairId },
    #[error("stage ledger broken at {stage:?}: {pairs_in} in, {pairs_dropped} dropped, next stage got {next_in}")]
    BrokenLedger { stage: String, pairs_in: u64, pairs_dropped: u64, next_in: u64 },
    #[error("cannot merge reports with different stage lists")]
    StageMismatch,
}

/// Removal bookkeeping for one pipeline stage.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StageStats {
    pub name: String,
    pub pairs_in: u64,
    pub pairs_dropped: u64,
    pub drop_reasons: BTreeMap<String, u64>,
}

impl StageStats {
    pub fn new(name: impl Into<String>) -> Self {
        StageStats { name: name.into(), ..StageStats::default() }
    }

    pub fn record_drop(&mut self, reason: &DropReason, pairs: u64) {
        self.pairs_dropped += pairs;
        *self.drop_reasons.entry(reason.code().to_string()).or_insert(0) += pairs;
    }
}

/// Corpus totals plus the ordered per-stage removal ledger.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PipelineStats {
    pub pairs: u64,
    pub cs_words: u64,
    pub en_words: u64,
    pub documents: u64,
    pub per_stage: Vec<StageStats>,
}

impl PipelineStats {
    pub fn add_document(&mut self, doc: &Document) {
        self.documents += 1;
        for pair in doc.pairs() {
            self.add_pair(pair);
        }
    }

    pub fn add_pair(&mut self, pair: &SentencePair) {
        self.pairs += 1;
        self.cs_words += word_count(pair.cs_text()) as u64;
        self.en_words += word_count(pair.en_text()) as u64;
    }

    /// Totals are additive over corpus concatenation; stage ledgers add
    /// entry-wise. Merging is associative and commutative, so shard
    /// order never shows in the result.
    pub fn merge(&mut self, other: &PipelineStats) -> Result<(), StatsError> {
        if self.per_stage.len() != other.per_stage.len()
            || self
                .per_stage
                .iter()
                .zip(&other.per_stage)
                .any(|(a, b)| a.name != b.name)
        {
            return Err(StatsError::StageMismatch);
        }
        self.pairs += other.pairs;
        self.cs_words += other.cs_words;
        self.en_words += other.en_words;
        self.documents += other.documents;
        for (mine, theirs) in self.per_stage.iter_mut().zip(&other.per_stage) {
            mine.pairs_in += theirs.pairs_in;
            mine.pairs_dropped += theirs.pairs_dropped;
            for (code, count) in &theirs.drop_reasons {
                *mine.drop_reasons.entry(code.clone()).or_insert(0) += count;
            }
        }
        Ok(())
    }

    /// Checks pair conservation: survivors of stage k feed stage k+1, and
    /// final survivors plus all drops equal the pairs that entered.
    pub fn validate_ledger(&self) -> Result<(), StatsError> {
        for window in self.per_stage.windows(2) {
            let (stage, next) = (&window[0], &window[1]);
            if stage.pairs_in - stage.pairs_dropped != next.pairs_in {
                return Err(StatsError::BrokenLedger {
                    stage: stage.name.clone(),
                    pairs_in: stage.pairs_in,
                    pairs_dropped: stage.pairs_dropped,
                    next_in: next.pairs_in,
                });
            }
        }
        if let (Some(first), Some(last)) = (self.per_stage.first(), self.per_stage.last()) {
            let dropped: u64 = self.per_stage.iter().map(|s| s.pairs_dropped).sum();
            if last.pairs_in - last.pairs_dropped + dropped != first.pairs_in {
                return Err(StatsError::BrokenLedger {
                    stage: last.name.clone(),
                    pairs_in: last.pairs_in,
                    pairs_dropped: last.pairs_dropped,
                    next_in: first.pairs_in,
                });
            }
        }
        Ok(())
    }

    /// Machine-readable report: a totals line, then one line per stage.
    pub fn render_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str("section\tname\tpairs_in\tpairs_dropped\tdrop_reasons\n");
        let _ = writeln!(
            out,
            "totals\tcorpus\t{}\t-\tdocuments={};cs_words={};en_words={}",
            self.pairs, self.documents, self.cs_words, self.en_words
        );
        for stage in &self.per_stage {
            let reasons = if stage.drop_reasons.is_empty() {
                "-".to_string()
            } else {
                stage
                    .drop_reasons
                    .iter()
                    .map(|(code, count)| format!("{code}={count}"))
                    .collect::<Vec<_>>()
                    .join(";")
            };
            let _ = writeln!(
                out,
                "stage\t{}\t{}\t{}\t{}",
                stage.name, stage.pairs_in, stage.pairs_dropped, reasons
            );
        }
        out
    }

    /// Aligned-column rendering for terminals.
    pub fn render_aligned(&self) -> String {
        let mut rows: Vec<[String; 4]> = vec![[
            "stage".to_string(),
            "pairs_in".to_string(),
            "dropped".to_string(),
            "reasons".to_string(),
        ]];
        for stage in &self.per_stage {
            let reasons = stage
                .drop_reasons
                .iter()
                .map(|(code, count)| format!("{code}={count}"))
                .collect::<Vec<_>>()
                .join(" ");
            rows.push([
                stage.name.clone(),
                stage.pairs_in.to_string(),
                stage.pairs_dropped.to_string(),
                reasons,
            ]);
        }
        let mut widths = [0usize; 4];
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        for row in &rows {
            let _ = writeln!(
                out,
                "{:<w0$}  {:>w1$}  {:>w2$}  {}",
                row[0],
                row[1],
                row[2],
                row[3],
                w0 = widths[0],
                w1 = widths[1],
                w2 = widths[2],
            );
        }
        let _ = writeln!(
            out,
            "\npairs {}  documents {}  cs_words {}  en_words {}",
            self.pairs, self.documents, self.cs_words, self.en_words
        );
        out
    }
}

/// Totals of a document stream: pairs, space-separated words per side,
/// document count. Deterministic and additive over concatenation.
pub fn corpus_stats<'a, I>(docs: I) -> PipelineStats
where
    I: IntoIterator<Item = &'a Document>,
{
    let mut stats = PipelineStats::default();
    for doc in docs {
        stats.add_document(doc);
    }
    stats
}

/// Single-pass survivor counts per adequacy threshold: a pair survives
/// threshold `t` unless its adq score is strictly below `t`. Counts are
/// non-increasing in the threshold.
pub fn size_projection<'a, I>(
    pairs: I,
    thresholds: &[f64],
) -> Result<Vec<(f64, u64)>, StatsError>
where
    I: IntoIterator<Item = &'a SentencePair>,
{
    let mut survivors = vec![0u64; thresholds.len()];
    for pair in pairs {
        let adq = pair
            .scores()
            .adq()
            .ok_or_else(|| StatsError::UnscoredPair { id: pair.id().clone() })?;
        for (count, &threshold) in survivors.iter_mut().zip(thresholds) {
            if adq >= threshold {
                *count += 1;
            }
        }
    }
    Ok(thresholds.iter().copied().zip(survivors).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{parse_pair_id, ScoreTriple};

    fn doc(texts: &[(&str, &str)]) -> Document {
        let pairs = texts
            .iter()
            .enumerate()
            .map(|(i, (cs, en))| {
                let id = parse_pair_id(&format!("t-d0-f0-s{}", i + 1)).unwrap();
                SentencePair::new(id, *cs, *en).unwrap()
            })
            .collect();
        Document::new(pairs).unwrap()
    }

    fn scored_pair(n: u64, adq: f64) -> SentencePair {
        SentencePair::with_scores(
            parse_pair_id(&format!("t-d0-f0-s{n}")).unwrap(),
            "a",
            "b",
            ScoreTriple::new(adq, 1.0, 1.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn counts_a_hand_checked_document() {
        let stats = corpus_stats([&doc(&[("Ahoj světe .", "Hello world .")])]);
        assert_eq!(stats.pairs, 1);
        assert_eq!(stats.cs_words, 3);
        assert_eq!(stats.en_words, 3);
        assert_eq!(stats.documents, 1);
    }

    #[test]
    fn empty_corpus_is_all_zeros() {
        let stats = corpus_stats(std::iter::empty());
        assert_eq!(stats, PipelineStats::default());
    }

    #[test]
    fn generated_corpus_totals_are_exact() {
        // 40 documents of 25 pairs, 4 cs words and 6 en words per pair
        let docs: Vec<Document> = (0..40)
            .map(|d| {
                let pairs = (1..=25)
                    .map(|s| {
                        let id = parse_pair_id(&format!("gen-d{d}-f0-s{s}")).unwrap();
                        SentencePair::new(id, "jedna dvě tři čtyři", "one two three four five six")
                            .unwrap()
                    })
                    .collect();
                Document::new(pairs).unwrap()
            })
            .collect();
        let stats = corpus_stats(&docs);
        assert_eq!(stats.pairs, 1000);
        assert_eq!(stats.documents, 40);
        assert_eq!(stats.cs_words, 4000);
        assert_eq!(stats.en_words, 6000);
    }

    #[test]
    fn stats_are_additive_over_concatenation() {
        let a = vec![doc(&[("a b", "x"), ("c", "y z")])];
        let b = vec![doc(&[("d", "w")])];
        let mut merged = corpus_stats(&a);
        merged.merge(&corpus_stats(&b)).unwrap();
        let whole: Vec<&Document> = a.iter().chain(&b).collect();
        assert_eq!(merged, corpus_stats(whole));
    }

    #[test]
    fn projection_with_zero_threshold_keeps_everything() {
        let pairs: Vec<SentencePair> = (1..=10).map(|n| scored_pair(n, 0.3)).collect();
        let out = size_projection(&pairs, &[0.0]).unwrap();
        assert_eq!(out, vec![(0.0, 10)]);
    }

    #[test]
    fn projection_above_one_only_counts_perfect_scores() {
        let pairs = vec![scored_pair(1, 1.0), scored_pair(2, 0.9)];
        let out = size_projection(&pairs, &[1.0, 1.5]).unwrap();
        assert_eq!(out, vec![(1.0, 1), (1.5, 0)]);
    }

    #[test]
    fn projection_requires_adq() {
        let unscored = SentencePair::new(parse_pair_id("t-d0-f0-s1").unwrap(), "a", "b").unwrap();
        assert!(matches!(
            size_projection([&unscored], &[0.5]),
            Err(StatsError::UnscoredPair { .. })
        ));
    }

    #[test]
    fn ledger_validation_catches_losses() {
        let mut stats = PipelineStats::default();
        stats.per_stage.push(StageStats {
            name: "first".into(),
            pairs_in: 10,
            pairs_dropped: 3,
            drop_reasons: BTreeMap::new(),
        });
        stats.per_stage.push(StageStats {
            name: "second".into(),
            pairs_in: 7,
            pairs_dropped: 0,
            drop_reasons: BTreeMap::new(),
        });
        assert!(stats.validate_ledger().is_ok());
        stats.per_stage[1].pairs_in = 6;
        assert!(matches!(stats.validate_ledger(), Err(StatsError::BrokenLedger { .. })));
    }

    #[test]
    fn tsv_report_has_one_line_per_stage() {
        let mut stats = PipelineStats::default();
        let mut stage = StageStats::new("sent-adq");
        stage.pairs_in = 5;
        stage.record_drop(&DropReason::LowAdq { adq: 0.01 }, 1);
        stats.per_stage.push(stage);
        let tsv = stats.render_tsv();
        assert!(tsv.contains("stage\tsent-adq\t5\t1\tlow_adq=1"));
        // aligned rendering carries the same numbers
        let aligned = stats.render_aligned();
        assert!(aligned.contains("sent-adq"));
        assert!(aligned.contains("low_adq=1"));
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use crate::model::{parse_pair_id, ScoreTriple};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn projection_matches_brute_force_and_is_monotone(
            adqs in proptest::collection::vec(0.0f64..=1.0, 0..200),
            mut thresholds in proptest::collection::vec(0.0f64..=1.0, 1..6),
        ) {
            let pairs: Vec<SentencePair> = adqs
                .iter()
                .enumerate()
                .map(|(i, &adq)| {
                    SentencePair::with_scores(
                        parse_pair_id(&format!("g-d0-f0-s{}", i + 1)).unwrap(),
                        "a",
                        "b",
                        ScoreTriple::new(adq, 1.0, 1.0).unwrap(),
                    )
                    .unwrap()
                })
                .collect();
            thresholds.sort_by(f64::total_cmp);
            let projected = size_projection(&pairs, &thresholds).unwrap();

            // brute force per threshold
            for &(threshold, count) in &projected {
                let expected = adqs.iter().filter(|&&adq| !(adq < threshold)).count() as u64;
                prop_assert_eq!(count, expected);
            }
            // non-increasing across sorted thresholds
            for window in projected.windows(2) {
                prop_assert!(window[1].1 <= window[0].1);
            }
        }
    }
}

//! Dual conditional cross-entropy adequacy scoring.
//!
//! A sentence pair is scored by two conditional models, one per
//! translation direction, each reporting a word-normalized cross-entropy
//! in nats per target word. The two cross-entropies combine into
//!
//! ```text
//! crossent_score = |H_A - H_B| + (H_A + H_B) / 2
//! adq_score      = exp(-crossent_score)
//! ```
//!
//! so pairs where the two directions agree and both assign high
//! probability score close to 1, and disagreement or low probability
//! pushes the score toward 0.
//!
//! Two model backends are built in: a lexical translation model estimated
//! with EM ([`LexicalModel`]), and a lookup table of externally computed
//! cross-entropies ([`ScoreFileProvider`]) for plugging in scores from
//! full translation models.

use std::collections::HashMap;
use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::model::{CrossEntropyPair, PairId, SentencePair};
use crate::text::split_words;

/// Default EM passes for [`train_lexical`].
pub const DEFAULT_EM_ITERATIONS: usize = 5;

/// Default per-word probability floor; keeps cross-entropies finite for
/// unseen words, and therefore adequacy scores inside (0, 1].
pub const DEFAULT_PROB_FLOOR: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum XentError {
    #[error("cannot train on an empty corpus")]
    EmptyCorpus,
    #[error("target side has no words")]
    EmptyTarget,
    #[error("no cross-entropy on record for {id}")]
    MissingScore { id: PairId },
    #[error("cross-entropy {value} is negative")]
    NegativeInput { value: f64 },
    #[error("model direction is {found}, expected {expected}")]
    DirectionMismatch { expected: Direction, found: Direction },
    #[error("scoring {id}: {source}")]
    PairFailed { id: PairId, source: Box<XentError> },
    #[error("model line {line}: {reason}")]
    ModelFormat { line: u64, reason: String },
    #[error("score file line {line}: {reason}")]
    ScoreFileFormat { line: u64, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Translation direction of a conditional model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Models P(en | cs); its cross-entropy is H_A in nats per English word.
    CsToEn,
    /// Models P(cs | en); its cross-entropy is H_B in nats per Czech word.
    EnToCs,
}

impl Direction {
    /// (source, target) texts of a pair under this direction.
    fn split<'a>(&self, pair: &'a SentencePair) -> (&'a str, &'a str) {
        match self {
            Direction::CsToEn => (pair.cs_text(), pair.en_text()),
            Direction::EnToCs => (pair.en_text(), pair.cs_text()),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::CsToEn => "cs-en",
            Direction::EnToCs => "en-cs",
        })
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cs-en" => Ok(Direction::CsToEn),
            "en-cs" => Ok(Direction::EnToCs),
            other => Err(format!("unknown direction {other:?}, expected cs-en or en-cs")),
        }
    }
}

/// A directed conditional translation model: reports the word-normalized
/// cross-entropy of a pair's target side given its source side, in nats
/// per target word. Finite, non-negative, deterministic.
pub trait ConditionalModel: Send + Sync {
    fn direction(&self) -> Direction;

    fn cross_entropy(&self, pair: &SentencePair) -> Result<f64, XentError>;
}

const NULL_ID: u32 = 0;

fn pack(source: u32, target: u32) -> u64 {
    ((source as u64) << 32) | target as u64
}

/// Word-to-word translation table estimated with EM under a uniform
/// alignment model, plus the NULL source word.
#[derive(Debug, Clone)]
pub struct LexicalModel {
    direction: Direction,
    em_iterations: usize,
    floor: f64,
    // dense word ids; source id 0 is NULL
    source_ids: HashMap<String, u32>,
    target_ids: HashMap<String, u32>,
    // (source, target) -> probability, normalized per source word
    t: HashMap<u64, f64>,
}

impl LexicalModel {
    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn em_iterations(&self) -> usize {
        self.em_iterations
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn table_len(&self) -> usize {
        self.t.len()
    }

    /// t(target | source); `None` source is the NULL word. Absent entries
    /// are 0.
    pub fn translation_prob(&self, target: &str, source: Option<&str>) -> f64 {
        let Some(&target_id) = self.target_ids.get(target) else {
            return 0.0;
        };
        let source_id = match source {
            None => NULL_ID,
            Some(word) => match self.source_ids.get(word) {
                Some(&id) => id,
                None => return 0.0,
            },
        };
        self.t.get(&pack(source_id, target_id)).copied().unwrap_or(0.0)
    }

    /// Assembles a model from explicit table entries; `None` source is
    /// NULL. Intended for tests and hand-built models.
    pub fn from_entries(
        direction: Direction,
        entries: &[(Option<&str>, &str, f64)],
        floor: f64,
    ) -> Self {
        let mut model = LexicalModel {
            direction,
            em_iterations: 0,
            floor,
            source_ids: HashMap::new(),
            target_ids: HashMap::new(),
            t: HashMap::new(),
        };
        for &(source, target, prob) in entries {
            let source_id = match source {
                None => NULL_ID,
                Some(word) => {
                    let next = model.source_ids.len() as u32 + 1;
                    *model.source_ids.entry(word.to_string()).or_insert(next)
                }
            };
            let next = model.target_ids.len() as u32;
            let target_id = *model.target_ids.entry(target.to_string()).or_insert(next);
            model.t.insert(pack(source_id, target_id), prob);
        }
        model
    }

    /// Word-normalized conditional cross-entropy of `target` given
    /// `source`:
    ///
    /// ```text
    /// -(1/|y|) * sum_j ln( (1/(|x|+1)) * sum_{i in x ∪ NULL} t(y_j | x_i) )
    /// ```
    ///
    /// with each per-word probability floored at `floor`.
    pub fn cross_entropy_texts(&self, source: &str, target: &str) -> Result<f64, XentError> {
        let target_words: Vec<&str> = split_words(target).collect();
        if target_words.is_empty() {
            return Err(XentError::EmptyTarget);
        }
        let source_ids: Vec<u32> = std::iter::once(NULL_ID)
            .chain(split_words(source).map(|w| self.source_ids.get(w).copied().unwrap_or(u32::MAX)))
            .collect();
        let positions = source_ids.len() as f64;
        let mut total = 0.0;
        for word in &target_words {
            let p = match self.target_ids.get(*word) {
                None => 0.0,
                Some(&target_id) => {
                    let mut sum = 0.0;
                    for &source_id in &source_ids {
                        if source_id != u32::MAX {
                            sum += self.t.get(&pack(source_id, target_id)).copied().unwrap_or(0.0);
                        }
                    }
                    sum / positions
                }
            };
            total += p.max(self.floor).ln();
        }
        Ok(-total / target_words.len() as f64)
    }

    /// Writes the versioned model dump; [`LexicalModel::load`] restores it
    /// exactly.
    pub fn save<W: Write>(&self, mut out: W) -> Result<(), XentError> {
        writeln!(out, "gigafilter-lexmodel\tv1")?;
        writeln!(out, "direction\t{}", self.direction)?;
        writeln!(out, "iterations\t{}", self.em_iterations)?;
        writeln!(out, "floor\t{}", self.floor)?;
        let mut source_by_id: HashMap<u32, &str> = HashMap::new();
        for (word, &id) in &self.source_ids {
            source_by_id.insert(id, word);
        }
        let mut target_by_id: HashMap<u32, &str> = HashMap::new();
        for (word, &id) in &self.target_ids {
            target_by_id.insert(id, word);
        }
        let mut lines: Vec<(&str, &str, f64)> = self
            .t
            .iter()
            .map(|(&key, &prob)| {
                let source_id = (key >> 32) as u32;
                let target_id = (key & 0xffff_ffff) as u32;
                let source = if source_id == NULL_ID { "" } else { source_by_id[&source_id] };
                (source, target_by_id[&target_id], prob)
            })
            .collect();
        lines.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        for (source, target, prob) in lines {
            writeln!(out, "t\t{source}\t{target}\t{prob}")?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads a model dump written by [`LexicalModel::save`].
    pub fn load<R: BufRead>(input: R) -> Result<Self, XentError> {
        let bad =
            |line: u64, reason: &str| XentError::ModelFormat { line, reason: reason.to_string() };
        let mut lines = input.lines().enumerate().map(|(i, r)| (i as u64 + 1, r));
        let mut header = |expect: &'static str| -> Result<(u64, String), XentError> {
            match lines.next() {
                Some((n, Ok(line))) => Ok((n, line)),
                Some((n, Err(e))) => Err(XentError::ModelFormat { line: n, reason: e.to_string() }),
                None => Err(XentError::ModelFormat {
                    line: 0,
                    reason: format!("unexpected end of file, expected {expect}"),
                }),
            }
        };
        let (n, magic) = header("header")?;
        if magic != "gigafilter-lexmodel\tv1" {
            return Err(bad(n, "not a gigafilter-lexmodel v1 file"));
        }
        let (n, line) = header("direction")?;
        let direction: Direction = line
            .strip_prefix("direction\t")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad(n, "expected direction line"))?;
        let (n, line) = header("iterations")?;
        let em_iterations: usize = line
            .strip_prefix("iterations\t")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad(n, "expected iterations line"))?;
        let (n, line) = header("floor")?;
        let floor: f64 = line
            .strip_prefix("floor\t")
            .and_then(|v| f64::from_str(v).ok())
            .ok_or_else(|| bad(n, "expected floor line"))?;

        let mut model = LexicalModel {
            direction,
            em_iterations,
            floor,
            source_ids: HashMap::new(),
            target_ids: HashMap::new(),
            t: HashMap::new(),
        };
        for (n, line) in lines {
            let line =
                line.map_err(|e| XentError::ModelFormat { line: n, reason: e.to_string() })?;
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 || fields[0] != "t" {
                return Err(bad(n, "expected t\\t<source>\\t<target>\\t<prob>"));
            }
            if fields[2].is_empty() {
                return Err(bad(n, "target word is empty"));
            }
            let prob: f64 = f64::from_str(fields[3]).map_err(|_| bad(n, "bad probability"))?;
            if !prob.is_finite() || prob < 0.0 {
                return Err(bad(n, "probability must be finite and non-negative"));
            }
            let source_id = if fields[1].is_empty() {
                NULL_ID
            } else {
                let next = model.source_ids.len() as u32 + 1;
                *model.source_ids.entry(fields[1].to_string()).or_insert(next)
            };
            let next = model.target_ids.len() as u32;
            let target_id = *model.target_ids.entry(fields[2].to_string()).or_insert(next);
            if model.t.insert(pack(source_id, target_id), prob).is_some() {
                return Err(bad(n, "duplicate table entry"));
            }
        }
        Ok(model)
    }
}

impl ConditionalModel for LexicalModel {
    fn direction(&self) -> Direction {
        self.direction
    }

    fn cross_entropy(&self, pair: &SentencePair) -> Result<f64, XentError> {
        let (source, target) = self.direction.split(pair);
        self.cross_entropy_texts(source, target)
    }
}

/// Training options for [`train_lexical`].
#[derive(Debug, Clone, Copy)]
pub struct TrainOptions {
    pub iterations: usize,
    /// Drop exact duplicate (cs, en) pairs before estimating; scoring
    /// models otherwise overweight sentences duplicated many times.
    pub dedup_sentences: bool,
    pub floor: f64,
}

impl Default for TrainOptions {
    fn default() -> Self {
        TrainOptions {
            iterations: DEFAULT_EM_ITERATIONS,
            dedup_sentences: false,
            floor: DEFAULT_PROB_FLOOR,
        }
    }
}

/// Training-set log-likelihood trajectory: the initial value plus one
/// entry per EM pass; non-decreasing for a correct implementation.
#[derive(Debug, Clone)]
pub struct TrainReport {
    pub log_likelihoods: Vec<f64>,
}

/// Estimates a [`LexicalModel`] on the corpus: the table starts uniform
/// over co-occurring vocabulary plus NULL, then runs exactly
/// `options.iterations` EM passes maximizing the uniform-alignment
/// likelihood. Deterministic given input order.
pub fn train_lexical<'a, I>(
    corpus: I,
    direction: Direction,
    options: TrainOptions,
) -> Result<(LexicalModel, TrainReport), XentError>
where
    I: IntoIterator<Item = &'a SentencePair>,
{
    // tokenize once; ids are assigned in first-occurrence order
    let mut source_ids: HashMap<String, u32> = HashMap::new();
    let mut target_ids: HashMap<String, u32> = HashMap::new();
    let mut sentences: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
    let mut seen_texts: std::collections::HashSet<(String, String)> =
        std::collections::HashSet::new();
    for pair in corpus {
        if options.dedup_sentences {
            let key = (pair.cs_text().to_string(), pair.en_text().to_string());
            if !seen_texts.insert(key) {
                continue;
            }
        }
        let (source, target) = direction.split(pair);
        let source_words: Vec<u32> = split_words(source)
            .map(|w| {
                let next = source_ids.len() as u32 + 1;
                *source_ids.entry(w.to_string()).or_insert(next)
            })
            .collect();
        let target_words: Vec<u32> = split_words(target)
            .map(|w| {
                let next = target_ids.len() as u32;
                *target_ids.entry(w.to_string()).or_insert(next)
            })
            .collect();
        if source_words.is_empty() || target_words.is_empty() {
            continue;
        }
        sentences.push((source_words, target_words));
    }
    if sentences.is_empty() {
        return Err(XentError::EmptyCorpus);
    }

    // uniform initialization over co-occurring pairs; NULL co-occurs with
    // every target word
    let mut t: HashMap<u64, f64> = HashMap::new();
    for (source_words, target_words) in &sentences {
        for &y in target_words {
            t.insert(pack(NULL_ID, y), 0.0);
            for &x in source_words {
                t.insert(pack(x, y), 0.0);
            }
        }
    }
    let mut cooc_per_source: HashMap<u32, u64> = HashMap::new();
    for &key in t.keys() {
        *cooc_per_source.entry((key >> 32) as u32).or_insert(0) += 1;
    }
    for (&key, prob) in t.iter_mut() {
        *prob = 1.0 / cooc_per_source[&((key >> 32) as u32)] as f64;
    }

    let likelihood = |t: &HashMap<u64, f64>| -> f64 {
        let mut ll = 0.0;
        for (source_words, target_words) in &sentences {
            let positions = source_words.len() as f64 + 1.0;
            for &y in target_words {
                let mut denom = t[&pack(NULL_ID, y)];
                for &x in source_words {
                    denom += t[&pack(x, y)];
                }
                ll += (denom / positions).ln();
            }
        }
        ll
    };

    let mut log_likelihoods = Vec::with_capacity(options.iterations + 1);
    for _ in 0..options.iterations {
        let mut counts: HashMap<u64, f64> = HashMap::with_capacity(t.len());
        let mut count_totals: HashMap<u32, f64> = HashMap::new();
        let mut ll = 0.0;
        for (source_words, target_words) in &sentences {
            let positions = source_words.len() as f64 + 1.0;
            for &y in target_words {
                let mut denom = t[&pack(NULL_ID, y)];
                for &x in source_words {
                    denom += t[&pack(x, y)];
                }
                ll += (denom / positions).ln();
                for x in std::iter::once(NULL_ID).chain(source_words.iter().copied()) {
                    let share = t[&pack(x, y)] / denom;
                    *counts.entry(pack(x, y)).or_insert(0.0) += share;
                    *count_totals.entry(x).or_insert(0.0) += share;
                }
            }
        }
        log_likelihoods.push(ll);
        for (key, prob) in t.iter_mut() {
            let total = count_totals[&((*key >> 32) as u32)];
            *prob = counts.get(key).copied().unwrap_or(0.0) / total;
        }
    }
    log_likelihoods.push(likelihood(&t));

    let model = LexicalModel {
        direction,
        em_iterations: options.iterations,
        floor: options.floor,
        source_ids,
        target_ids,
        t,
    };
    Ok((model, TrainReport { log_likelihoods }))
}

/// Table of externally computed word-normalized cross-entropies, keyed by
/// pair id. One file carries both directions.
#[derive(Debug, Clone, Default)]
pub struct ScoreFile {
    scores: HashMap<PairId, (f64, f64)>,
}

impl ScoreFile {
    /// Reads `pair_id \t h_a \t h_b` lines; values in nats per word.
    pub fn load<R: BufRead>(input: R) -> Result<Self, XentError> {
        let bad = |line: u64, reason: String| XentError::ScoreFileFormat { line, reason };
        let mut scores = HashMap::new();
        for (i, line) in input.lines().enumerate() {
            let n = i as u64 + 1;
            let line = line.map_err(|e| bad(n, e.to_string()))?;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(bad(n, format!("expected 3 fields, found {}", fields.len())));
            }
            let id = crate::model::parse_pair_id(fields[0]).map_err(|e| bad(n, e.to_string()))?;
            let parse = |field: &str| -> Result<f64, XentError> {
                let value =
                    f64::from_str(field).map_err(|_| bad(n, format!("bad value {field:?}")))?;
                if !value.is_finite() || value < 0.0 {
                    return Err(bad(n, format!("cross-entropy {value} must be finite and >= 0")));
                }
                Ok(value)
            };
            let h_a = parse(fields[1])?;
            let h_b = parse(fields[2])?;
            if scores.insert(id, (h_a, h_b)).is_some() {
                return Err(bad(n, format!("duplicate pair id {}", fields[0])));
            }
        }
        Ok(ScoreFile { scores })
    }

    /// Writes the table sorted by pair id.
    pub fn save<W: Write>(&self, mut out: W) -> Result<(), XentError> {
        let mut entries: Vec<(&PairId, &(f64, f64))> = self.scores.iter().collect();
        entries.sort_by(|a, b| a.0.cmp(b.0));
        for (id, (h_a, h_b)) in entries {
            writeln!(out, "{id}\t{h_a}\t{h_b}")?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn insert(&mut self, id: PairId, h: CrossEntropyPair) {
        self.scores.insert(id, (h.h_a(), h.h_b()));
    }

    pub fn get(&self, id: &PairId) -> Option<CrossEntropyPair> {
        self.scores
            .get(id)
            .map(|&(h_a, h_b)| CrossEntropyPair::new(h_a, h_b).expect("validated on load"))
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// One direction of a [`ScoreFile`], usable wherever a conditional model
/// is expected. Lookup misses are [`XentError::MissingScore`].
#[derive(Debug, Clone)]
pub struct ScoreFileProvider {
    table: Arc<ScoreFile>,
    direction: Direction,
}

impl ScoreFileProvider {
    pub fn new(table: Arc<ScoreFile>, direction: Direction) -> Self {
        ScoreFileProvider { table, direction }
    }
}

impl ConditionalModel for ScoreFileProvider {
    fn direction(&self) -> Direction {
        self.direction
    }

    fn cross_entropy(&self, pair: &SentencePair) -> Result<f64, XentError> {
        let entry = self
            .table
            .get(pair.id())
            .ok_or_else(|| XentError::MissingScore { id: pair.id().clone() })?;
        Ok(match self.direction {
            Direction::CsToEn => entry.h_a(),
            Direction::EnToCs => entry.h_b(),
        })
    }
}

/// `|H_A - H_B| + (H_A + H_B) / 2`; always at least `max(H_A, H_B)`.
pub fn crossent_score(h: &CrossEntropyPair) -> f64 {
    (h.h_a() - h.h_b()).abs() + (h.h_a() + h.h_b()) / 2.0
}

/// `exp(-crossent)`, in (0, 1]; strictly decreasing in the input.
pub fn adq_score(crossent: f64) -> Result<f64, XentError> {
    if !(crossent >= 0.0) {
        return Err(XentError::NegativeInput { value: crossent });
    }
    Ok((-crossent).exp())
}

/// Fills the pair's adq score from both models; language score fields are
/// untouched.
pub fn score_pair(
    pair: &mut SentencePair,
    model_a: &dyn ConditionalModel,
    model_b: &dyn ConditionalModel,
) -> Result<(), XentError> {
    let wrap = |id: &PairId, source: XentError| XentError::PairFailed {
        id: id.clone(),
        source: Box::new(source),
    };
    let h_a = model_a.cross_entropy(pair).map_err(|e| wrap(pair.id(), e))?;
    let h_b = model_b.cross_entropy(pair).map_err(|e| wrap(pair.id(), e))?;
    let h = CrossEntropyPair::new(h_a, h_b)
        .map_err(|_| wrap(pair.id(), XentError::NegativeInput { value: h_a.min(h_b) }))?;
    let adq = adq_score(crossent_score(&h))?;
    pair.scores_mut().set_adq(adq).expect("adequacy scores are in (0, 1]");
    Ok(())
}

/// Scores a stream of pairs in order. `model_a` must be directed cs→en
/// and `model_b` en→cs; errors carry the offending pair id.
pub fn score_corpus<I>(
    pairs: I,
    model_a: &dyn ConditionalModel,
    model_b: &dyn ConditionalModel,
) -> Result<Vec<SentencePair>, XentError>
where
    I: IntoIterator<Item = SentencePair>,
{
    check_directions(model_a, model_b)?;
    let mut out = Vec::new();
    for mut pair in pairs {
        score_pair(&mut pair, model_a, model_b)?;
        out.push(pair);
    }
    Ok(out)
}

/// Validates the (cs→en, en→cs) pairing of the two scoring models.
pub fn check_directions(
    model_a: &dyn ConditionalModel,
    model_b: &dyn ConditionalModel,
) -> Result<(), XentError> {
    if model_a.direction() != Direction::CsToEn {
        return Err(XentError::DirectionMismatch {
            expected: Direction::CsToEn,
            found: model_a.direction(),
        });
    }
    if model_b.direction() != Direction::EnToCs {
        return Err(XentError::DirectionMismatch {
            expected: Direction::EnToCs,
            found: model_b.direction(),
        });
    }
    Ok(())
}

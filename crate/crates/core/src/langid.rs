//! Pluggable language identification with a built-in character n-gram
//! classifier, plus the scaled per-language scores derived from it.
//!
//! The built-in model is an interpolated character trigram model with
//! additive smoothing over the alphabet observed in training plus one
//! unknown-character bucket. A text is scored by its average per-character
//! log-likelihood over cyclic character windows (the context of the first
//! characters wraps around to the end of the text), which makes the
//! likelihood a pure function of window frequencies: duplicated text
//! scores the same as the original, so short and long inputs are directly
//! comparable.

use std::collections::{BTreeMap, HashMap};
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use thiserror::Error;

use crate::model::{Document, LangDistribution, Side};

/// Additive smoothing mass per n-gram cell.
pub const SMOOTHING_ALPHA: f64 = 0.1;

/// Interpolation weights for unigram, bigram, trigram probabilities.
const LAMBDA: [f64; 3] = [0.1, 0.3, 0.6];

/// Minimum training material for a usable profile.
pub const MIN_TRAIN_CHARS: usize = 1000;

#[derive(Debug, Error)]
pub enum LangIdError {
    #[error("insufficient training data: {chars} characters, need at least {MIN_TRAIN_CHARS}")]
    InsufficientData { chars: usize },
    #[error("no language profiles supplied")]
    EmptyProfileSet,
    #[error("profiles share the language code {lang:?}")]
    DuplicateLanguage { lang: String },
    #[error("cannot classify empty text")]
    EmptyText,
    #[error("profile line {line}: {reason}")]
    ProfileFormat { line: u64, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

const UNK: u32 = 0;

fn pack2(a: u32, b: u32) -> u64 {
    ((a as u64) << 21) | b as u64
}

fn pack3(a: u32, b: u32, c: u32) -> u64 {
    ((a as u64) << 42) | ((b as u64) << 21) | c as u64
}

/// Character trigram model for one language. Immutable after training.
///
/// Counts, not probabilities, are the persistent state; conditional
/// probabilities are derived with the smoothing mass on demand, so a
/// saved and reloaded profile scores bit-identically.
#[derive(Debug, Clone, PartialEq)]
pub struct LanguageProfile {
    lang: String,
    alpha: f64,
    // codepoint-sorted alphabet; dense ids start at 1, 0 is the unknown bucket
    alphabet: Vec<char>,
    char_ids: HashMap<char, u32>,
    unigrams: Vec<u64>,
    total_chars: u64,
    bigrams: HashMap<u64, u64>,
    bigram_ctx: HashMap<u32, u64>,
    trigrams: HashMap<u64, u64>,
    trigram_ctx: HashMap<u64, u64>,
}

impl LanguageProfile {
    pub fn lang(&self) -> &str {
        &self.lang
    }

    pub fn smoothing_mass(&self) -> f64 {
        self.alpha
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    /// Vocabulary size for smoothing: alphabet plus the unknown bucket.
    fn vocab(&self) -> f64 {
        (self.alphabet.len() + 1) as f64
    }

    fn id_of(&self, c: char) -> u32 {
        self.char_ids.get(&c).copied().unwrap_or(UNK)
    }

    /// P(c) with additive smoothing.
    fn p1(&self, c: u32) -> f64 {
        let count = self.unigrams[c as usize] as f64;
        (count + self.alpha) / (self.total_chars as f64 + self.alpha * self.vocab())
    }

    /// P(c | b) with additive smoothing; unseen contexts are uniform.
    fn p2(&self, b: u32, c: u32) -> f64 {
        let count = self.bigrams.get(&pack2(b, c)).copied().unwrap_or(0) as f64;
        let ctx = self.bigram_ctx.get(&b).copied().unwrap_or(0) as f64;
        (count + self.alpha) / (ctx + self.alpha * self.vocab())
    }

    /// P(c | a, b) with additive smoothing; unseen contexts are uniform.
    fn p3(&self, a: u32, b: u32, c: u32) -> f64 {
        let count = self.trigrams.get(&pack3(a, b, c)).copied().unwrap_or(0) as f64;
        let ctx = self.trigram_ctx.get(&pack2(a, b)).copied().unwrap_or(0) as f64;
        (count + self.alpha) / (ctx + self.alpha * self.vocab())
    }

    /// Average per-character log-likelihood over cyclic windows.
    pub fn log_likelihood(&self, text: &str) -> Result<f64, LangIdError> {
        let ids: Vec<u32> = text.chars().map(|c| self.id_of(c)).collect();
        let m = ids.len();
        if m == 0 {
            return Err(LangIdError::EmptyText);
        }
        let mut sum = 0.0;
        for i in 0..m {
            let c = ids[i];
            let b = ids[(i + 2 * m - 1) % m];
            let a = ids[(i + 2 * m - 2) % m];
            let p = LAMBDA[0] * self.p1(c) + LAMBDA[1] * self.p2(b, c) + LAMBDA[2] * self.p3(a, b, c);
            sum += p.ln();
        }
        Ok(sum / m as f64)
    }

    /// Writes the versioned profile dump; [`LanguageProfile::load`]
    /// restores it exactly.
    pub fn save<W: Write>(&self, mut out: W) -> Result<(), LangIdError> {
        writeln!(out, "gigafilter-profile\tv1")?;
        writeln!(out, "lang\t{}", self.lang)?;
        writeln!(out, "alpha\t{}", self.alpha)?;
        for (i, &c) in self.alphabet.iter().enumerate() {
            writeln!(out, "1\t{}\t{}", escape_gram(&[c]), self.unigrams[i + 1])?;
        }
        let mut bigram_lines: Vec<(Vec<char>, u64)> = self
            .bigrams
            .iter()
            .map(|(&key, &count)| {
                let b = (key >> 21) as u32;
                let c = (key & 0x1f_ffff) as u32;
                (vec![self.alphabet[b as usize - 1], self.alphabet[c as usize - 1]], count)
            })
            .collect();
        bigram_lines.sort();
        for (gram, count) in bigram_lines {
            writeln!(out, "2\t{}\t{}", escape_gram(&gram), count)?;
        }
        let mut trigram_lines: Vec<(Vec<char>, u64)> = self
            .trigrams
            .iter()
            .map(|(&key, &count)| {
                let a = (key >> 42) as u32;
                let b = ((key >> 21) & 0x1f_ffff) as u32;
                let c = (key & 0x1f_ffff) as u32;
                (
                    vec![
                        self.alphabet[a as usize - 1],
                        self.alphabet[b as usize - 1],
                        self.alphabet[c as usize - 1],
                    ],
                    count,
                )
            })
            .collect();
        trigram_lines.sort();
        for (gram, count) in trigram_lines {
            writeln!(out, "3\t{}\t{}", escape_gram(&gram), count)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads a profile dump written by [`LanguageProfile::save`].
    pub fn load<R: BufRead>(input: R) -> Result<Self, LangIdError> {
        let bad = |line: u64, reason: &str| LangIdError::ProfileFormat {
            line,
            reason: reason.to_string(),
        };
        let mut lines = input.lines().enumerate();
        let mut next = |expect: &'static str| -> Result<(u64, String), LangIdError> {
            match lines.next() {
                Some((i, Ok(line))) => Ok((i as u64 + 1, line)),
                Some((i, Err(e))) => Err(LangIdError::ProfileFormat {
                    line: i as u64 + 1,
                    reason: e.to_string(),
                }),
                None => Err(LangIdError::ProfileFormat {
                    line: 0,
                    reason: format!("unexpected end of file, expected {expect}"),
                }),
            }
        };

        let (n, header) = next("header")?;
        if header != "gigafilter-profile\tv1" {
            return Err(bad(n, "not a gigafilter-profile v1 file"));
        }
        let (n, lang_line) = next("lang")?;
        let lang = lang_line
            .strip_prefix("lang\t")
            .ok_or_else(|| bad(n, "expected lang line"))?
            .to_string();
        let (n, alpha_line) = next("alpha")?;
        let alpha = alpha_line
            .strip_prefix("alpha\t")
            .and_then(|v| f64::from_str(v).ok())
            .ok_or_else(|| bad(n, "expected alpha line"))?;

        let mut counts: [BTreeMap<Vec<char>, u64>; 3] = Default::default();
        for (i, line) in lines {
            let line = line.map_err(|e| LangIdError::ProfileFormat {
                line: i as u64 + 1,
                reason: e.to_string(),
            })?;
            let n = i as u64 + 1;
            let mut fields = line.splitn(3, '\t');
            let order: usize = fields
                .next()
                .and_then(|v| v.parse().ok())
                .filter(|&o| (1..=3).contains(&o))
                .ok_or_else(|| bad(n, "gram order must be 1, 2 or 3"))?;
            let gram = unescape_gram(fields.next().ok_or_else(|| bad(n, "missing gram"))?)
                .ok_or_else(|| bad(n, "bad gram escape"))?;
            let count: u64 = fields
                .next()
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| bad(n, "missing or bad count"))?;
            if gram.len() != order {
                return Err(bad(n, "gram length does not match its order"));
            }
            if counts[order - 1].insert(gram, count).is_some() {
                return Err(bad(n, "duplicate gram"));
            }
        }
        let [uni, bi, tri] = counts;
        let alphabet: Vec<char> = uni.keys().map(|g| g[0]).collect();
        let mut profile = LanguageProfile::from_parts(lang, alpha, alphabet);
        for (gram, count) in uni {
            let c = profile.id_of(gram[0]);
            profile.unigrams[c as usize] = count;
            profile.total_chars += count;
        }
        for (gram, count) in bi {
            let (b, c) = (profile.id_of(gram[0]), profile.id_of(gram[1]));
            if b == UNK || c == UNK {
                return Err(bad(0, "bigram over characters missing from the alphabet"));
            }
            profile.bigrams.insert(pack2(b, c), count);
            *profile.bigram_ctx.entry(b).or_insert(0) += count;
        }
        for (gram, count) in tri {
            let (a, b, c) = (profile.id_of(gram[0]), profile.id_of(gram[1]), profile.id_of(gram[2]));
            if a == UNK || b == UNK || c == UNK {
                return Err(bad(0, "trigram over characters missing from the alphabet"));
            }
            profile.trigrams.insert(pack3(a, b, c), count);
            *profile.trigram_ctx.entry(pack2(a, b)).or_insert(0) += count;
        }
        Ok(profile)
    }

    fn from_parts(lang: String, alpha: f64, alphabet: Vec<char>) -> Self {
        let char_ids: HashMap<char, u32> =
            alphabet.iter().enumerate().map(|(i, &c)| (c, i as u32 + 1)).collect();
        let unigrams = vec![0; alphabet.len() + 1];
        LanguageProfile {
            lang,
            alpha,
            alphabet,
            char_ids,
            unigrams,
            total_chars: 0,
            bigrams: HashMap::new(),
            bigram_ctx: HashMap::new(),
            trigrams: HashMap::new(),
            trigram_ctx: HashMap::new(),
        }
    }
}

fn escape_gram(chars: &[char]) -> String {
    let mut out = String::new();
    for &c in chars {
        match c {
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\\' => out.push_str("\\\\"),
            c => out.push(c),
        }
    }
    out
}

fn unescape_gram(text: &str) -> Option<Vec<char>> {
    let mut out = Vec::new();
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next()? {
            't' => out.push('\t'),
            'n' => out.push('\n'),
            'r' => out.push('\r'),
            '\\' => out.push('\\'),
            _ => return None,
        }
    }
    Some(out)
}

/// Trains a character trigram profile on the given samples. N-grams never
/// cross sample boundaries. Deterministic given identical input order.
pub fn train_profile<S: AsRef<str>>(samples: &[S], lang: &str) -> Result<LanguageProfile, LangIdError> {
    let total: usize = samples.iter().map(|s| s.as_ref().chars().count()).sum();
    if samples.is_empty() || total < MIN_TRAIN_CHARS {
        return Err(LangIdError::InsufficientData { chars: total });
    }
    let alphabet: Vec<char> = samples
        .iter()
        .flat_map(|s| s.as_ref().chars())
        .collect::<std::collections::BTreeSet<char>>()
        .into_iter()
        .collect();
    let mut profile = LanguageProfile::from_parts(lang.to_string(), SMOOTHING_ALPHA, alphabet);
    for sample in samples {
        let ids: Vec<u32> = sample.as_ref().chars().map(|c| profile.id_of(c)).collect();
        for (i, &c) in ids.iter().enumerate() {
            profile.unigrams[c as usize] += 1;
            profile.total_chars += 1;
            if i >= 1 {
                let b = ids[i - 1];
                *profile.bigrams.entry(pack2(b, c)).or_insert(0) += 1;
                *profile.bigram_ctx.entry(b).or_insert(0) += 1;
            }
            if i >= 2 {
                let (a, b) = (ids[i - 2], ids[i - 1]);
                *profile.trigrams.entry(pack3(a, b, c)).or_insert(0) += 1;
                *profile.trigram_ctx.entry(pack2(a, b)).or_insert(0) += 1;
            }
        }
    }
    Ok(profile)
}

/// Softmax over the profiles' average per-character log-likelihoods.
pub fn classify(text: &str, profiles: &[LanguageProfile]) -> Result<LangDistribution, LangIdError> {
    if profiles.is_empty() {
        return Err(LangIdError::EmptyProfileSet);
    }
    let mut scores: BTreeMap<String, f64> = BTreeMap::new();
    for profile in profiles {
        let ll = profile.log_likelihood(text)?;
        if scores.insert(profile.lang().to_string(), ll).is_some() {
            return Err(LangIdError::DuplicateLanguage { lang: profile.lang().to_string() });
        }
    }
    let max = scores.values().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for ll in scores.values_mut() {
        *ll = (*ll - max).exp();
        sum += *ll;
    }
    let entries: BTreeMap<String, f64> = scores.into_iter().map(|(lang, e)| (lang, e / sum)).collect();
    Ok(LangDistribution::new(entries).expect("softmax output is a normalized distribution"))
}

/// Thresholds of the sentence-level language-score rule: the score only
/// fires on sentences with more than `min_words` words on a side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LangScoreRule {
    pub min_words: usize,
    pub min_score: f64,
}

impl Default for LangScoreRule {
    fn default() -> Self {
        LangScoreRule { min_words: 10, min_score: 0.5 }
    }
}

/// Probability of `target` scaled by the probability of the most probable
/// language. 1 exactly when the target attains the maximum; languages
/// absent from the distribution score 0.
pub fn scaled_lang_score(dist: &LangDistribution, target: &str) -> f64 {
    let (_, max) = dist.argmax();
    dist.prob(target) / max
}

/// The argmax language of a document side, with the side's sentences
/// joined by single spaces.
pub fn side_language(
    doc: &Document,
    side: Side,
    profiles: &[LanguageProfile],
) -> Result<String, LangIdError> {
    let dist = classify(&doc.joined_side(side), profiles)?;
    Ok(dist.argmax().0.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{parse_pair_id, SentencePair};

    const CS_SAMPLES: &[&str] = &[
        "Vláda dnes schválila nový zákon o ochraně přírody a krajiny.",
        "Příliš žluťoučký kůň úpěl ďábelské ódy u řeky za městem.",
        "Děti si hrály na zahradě celé odpoledne a večer šly spát.",
        "Česká republika leží ve střední Evropě a sousedí se čtyřmi státy.",
        "Počasí bude zítra oblačné, místy přeháňky a slabý vítr.",
        "Přečetl jsem si včera zajímavou knihu o dějinách evropské hudby.",
        "Na náměstí stojí stará radnice s věží a orlojem.",
        "Učitelé připravují žáky na přijímací zkoušky ze všech předmětů.",
        "Řidič musí dávat pozor na chodce přecházející silnici.",
        "V zimě jezdíme na hory lyžovat a v létě k moři.",
        "Praha je hlavní město České republiky a žije v ní přes milion obyvatel.",
        "Vědci objevili nový druh brouka v deštném pralese na Borneu.",
        "Kniha vyšla loni na podzim a hned se stala bestsellerem.",
        "Město plánuje opravit most přes řeku do konce příštího roku.",
        "Staré stromy v parku poskytují stín návštěvníkům i ptákům.",
        "Lékaři doporučují pravidelný pohyb a vyváženou stravu pro zdraví.",
        "Hudebníci zahráli na koncertě skladby českých i světových autorů.",
        "Zemědělci letos sklidili méně obilí kvůli suchému létu.",
    ];

    const EN_SAMPLES: &[&str] = &[
        "The government approved a new law on nature protection today.",
        "Children played in the garden all afternoon and went to bed early.",
        "The weather tomorrow will be cloudy with occasional showers and light wind.",
        "I read an interesting book about the history of European music yesterday.",
        "The old town hall with its tower stands on the main square.",
        "Teachers prepare their students for entrance examinations in every subject.",
        "Drivers must watch out for pedestrians crossing the road at night.",
        "In winter we go skiing in the mountains and in summer to the sea.",
        "The committee discussed the proposal for more than three hours.",
        "Many visitors come to the city to see its famous bridges.",
        "Prague is the capital of the Czech Republic with over a million inhabitants.",
        "Scientists discovered a new species of beetle in the rainforest of Borneo.",
        "The book was published last autumn and immediately became a bestseller.",
        "The city plans to repair the bridge across the river by next year.",
        "Old trees in the park give shade to visitors and birds alike.",
        "Doctors recommend regular exercise and a balanced diet for good health.",
        "The musicians performed works by Czech and international composers at the concert.",
        "Farmers harvested less grain this year because of the dry summer.",
    ];

    fn cs_profile() -> LanguageProfile {
        train_profile(CS_SAMPLES, "cs").unwrap()
    }

    fn en_profile() -> LanguageProfile {
        train_profile(EN_SAMPLES, "en").unwrap()
    }

    #[test]
    fn training_is_deterministic() {
        assert_eq!(cs_profile(), cs_profile());
    }

    #[test]
    fn insufficient_data_is_rejected() {
        let err = train_profile(&["krátký text"], "cs").unwrap_err();
        assert!(matches!(err, LangIdError::InsufficientData { .. }));
        assert!(matches!(
            train_profile::<&str>(&[], "cs").unwrap_err(),
            LangIdError::InsufficientData { chars: 0 }
        ));
    }

    #[test]
    fn czech_profile_prefers_heldout_czech() {
        let heldout = "Ředitel školy oznámil, že příští týden proběhnou třídní schůzky.";
        let cs_ll = cs_profile().log_likelihood(heldout).unwrap();
        let en_ll = en_profile().log_likelihood(heldout).unwrap();
        assert!(cs_ll > en_ll, "cs {cs_ll} should beat en {en_ll}");
    }

    #[test]
    fn degenerate_alphabet_concentrates_probability() {
        let sample = "a".repeat(1200);
        let profile = train_profile(&[sample.as_str()], "aa").unwrap();
        let a = profile.id_of('a');
        // within smoothing tolerance of 1: only the unknown bucket competes
        assert!(profile.p3(a, a, a) > 0.99);
        assert!(profile.p1(a) > 0.99);
    }

    #[test]
    fn conditional_probabilities_sum_to_one_with_smoothing() {
        let profile = cs_profile();
        let vocab_ids: Vec<u32> = (0..=profile.alphabet_size() as u32).collect();
        // unigram distribution
        let total: f64 = vocab_ids.iter().map(|&c| profile.p1(c)).sum();
        assert!((total - 1.0).abs() < 1e-6, "unigram sum {total}");
        // a seen and an unseen bigram context
        for b in [profile.id_of('a'), UNK] {
            let total: f64 = vocab_ids.iter().map(|&c| profile.p2(b, c)).sum();
            assert!((total - 1.0).abs() < 1e-6, "bigram sum {total}");
        }
        // a seen and an unseen trigram context
        for (a, b) in [(profile.id_of('s'), profile.id_of('t')), (UNK, UNK)] {
            let total: f64 = vocab_ids.iter().map(|&c| profile.p3(a, b, c)).sum();
            assert!((total - 1.0).abs() < 1e-6, "trigram sum {total}");
        }
    }

    #[test]
    fn single_profile_classifies_everything_as_itself() {
        let dist = classify("whatever text", &[cs_profile()]).unwrap();
        assert_eq!(dist.prob("cs"), 1.0);
    }

    #[test]
    fn accented_czech_wins_over_english() {
        let dist = classify("Žluťoučký kůň úpěl ďábelské ódy", &[cs_profile(), en_profile()]).unwrap();
        assert_eq!(dist.argmax().0, "cs");
    }

    #[test]
    fn classification_is_invariant_under_text_duplication() {
        let profiles = [cs_profile(), en_profile()];
        let text = "The committee discussed the new proposal";
        let once = classify(text, &profiles).unwrap();
        let twice = classify(&format!("{text}{text}"), &profiles).unwrap();
        for (lang, p) in once.iter() {
            assert!((p - twice.prob(lang)).abs() < 1e-6, "{lang}: {p} vs {}", twice.prob(lang));
        }
    }

    #[test]
    fn classify_rejects_empty_inputs() {
        assert!(matches!(classify("text", &[]), Err(LangIdError::EmptyProfileSet)));
        assert!(matches!(classify("", &[cs_profile()]), Err(LangIdError::EmptyText)));
    }

    #[test]
    fn classify_rejects_duplicate_languages() {
        assert!(matches!(
            classify("text", &[cs_profile(), cs_profile()]),
            Err(LangIdError::DuplicateLanguage { .. })
        ));
    }

    fn dist(entries: &[(&str, f64)]) -> LangDistribution {
        LangDistribution::new(entries.iter().map(|(k, v)| (k.to_string(), *v)).collect()).unwrap()
    }

    #[test]
    fn scaled_score_is_one_for_the_argmax() {
        let d = dist(&[("cs", 0.9), ("en", 0.1)]);
        assert_eq!(scaled_lang_score(&d, "cs"), 1.0);
    }

    #[test]
    fn scaled_score_divides_by_the_maximum() {
        let d = dist(&[("sk", 0.6), ("cs", 0.3), ("en", 0.1)]);
        assert!((scaled_lang_score(&d, "cs") - 0.5).abs() < 1e-12);
    }

    #[test]
    fn scaled_score_tie_counts_as_maximum() {
        let d = dist(&[("cs", 0.5), ("en", 0.5)]);
        assert_eq!(scaled_lang_score(&d, "en"), 1.0);
        assert_eq!(scaled_lang_score(&d, "cs"), 1.0);
    }

    #[test]
    fn scaled_score_of_absent_language_is_zero() {
        let d = dist(&[("cs", 1.0)]);
        assert_eq!(scaled_lang_score(&d, "de"), 0.0);
    }

    #[test]
    fn side_language_reads_the_requested_side() {
        let mk = |s: &str, cs: &str, en: &str| {
            SentencePair::new(parse_pair_id(s).unwrap(), cs, en).unwrap()
        };
        let doc = Document::new(vec![
            mk(
                "t-d0-f0-s1",
                "Děti si hrály na zahradě celé odpoledne.",
                "Children played in the garden all afternoon.",
            ),
            mk(
                "t-d0-f0-s2",
                "Počasí bude zítra oblačné a chladné.",
                "The weather tomorrow will be cloudy and cold.",
            ),
        ])
        .unwrap();
        let profiles = [cs_profile(), en_profile()];
        assert_eq!(side_language(&doc, Side::Cs, &profiles).unwrap(), "cs");
        assert_eq!(side_language(&doc, Side::En, &profiles).unwrap(), "en");
    }

    #[test]
    fn profile_round_trips_exactly() {
        let profile = cs_profile();
        let mut buf = Vec::new();
        profile.save(&mut buf).unwrap();
        let reloaded = LanguageProfile::load(buf.as_slice()).unwrap();
        assert_eq!(profile, reloaded);
        // and the dump itself is stable
        let mut again = Vec::new();
        reloaded.save(&mut again).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn profile_load_rejects_garbage() {
        assert!(LanguageProfile::load("not a profile\n".as_bytes()).is_err());
        let truncated = "gigafilter-profile\tv1\nlang\tcs\n";
        assert!(LanguageProfile::load(truncated.as_bytes()).is_err());
    }

    #[test]
    fn grams_with_control_characters_round_trip() {
        let sample = "a\tb c\\d ".repeat(200);
        let profile = train_profile(&[sample.as_str()], "ctl").unwrap();
        let mut buf = Vec::new();
        profile.save(&mut buf).unwrap();
        assert_eq!(LanguageProfile::load(buf.as_slice()).unwrap(), profile);
    }
}

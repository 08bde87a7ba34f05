//! Streaming reader/writer for the six-column, document-delimited corpus
//! format, plus segmentation of raw aligned text into documents and files.
//!
//! Corpus files are UTF-8 with LF line endings. Each non-empty line holds
//! six tab-separated fields: id, adq_score, cs_lang_score, en_lang_score,
//! Czech sentence, English sentence. A single empty line separates
//! consecutive documents. Scores serialize with exactly six digits after
//! the decimal point (round half to even), so re-serialization is
//! idempotent and output is byte-identical across runs.
//!
//! Reading is lenient where writing is strict: any decimal in [0, 1] is
//! accepted as a score, and runs of blank lines collapse into one
//! separator. Invalid UTF-8 is fatal and reported with its byte offset.

use std::io::{self, BufRead, Write};
use std::num::NonZeroUsize;
use std::ops::Range;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{DocKey, Document, ModelError, PairId, ScoreTriple, SentencePair, Side};

#[derive(Debug, Error)]
pub enum TsvError {
    #[error("line {line}: expected 6 tab-separated fields, found {found}")]
    MalformedLine { line: u64, found: usize },
    #[error("line {line}: {source}")]
    MalformedId { line: u64, source: ModelError },
    #[error("line {line}: score field {field:?} is not a decimal")]
    MalformedScore { line: u64, field: String },
    #[error("line {line}: score {value} outside [0, 1]")]
    ScoreOutOfRange { line: u64, value: f64 },
    #[error("line {line}: document key {found} differs from block key {expected}")]
    MixedDocumentBlock { line: u64, expected: DocKey, found: DocKey },
    #[error("line {line}: sentence index does not increase within the document block")]
    NonIncreasingSent { line: u64 },
    #[error("line {line}: {source}")]
    InvalidPair { line: u64, source: ModelError },
    #[error("invalid UTF-8 at byte offset {offset}")]
    InvalidUtf8 { offset: u64 },
    #[error("pair {id} is not fully scored")]
    UnscoredPair { id: PairId },
    #[error("aligned inputs differ in length: {cs} cs lines vs {en} en lines")]
    LengthMismatch { cs: usize, en: usize },
    #[error("line {line}: blank line on {side} side only")]
    BlankMismatch { line: u64, side: Side },
    #[error("break entry {entry}: {reason}")]
    InvalidBreak { entry: String, reason: String },
    #[error("invalid source name {name:?}: must match [a-z0-9_.]+")]
    InvalidSource { name: String },
    #[error("duplicate document name {name:?}")]
    DuplicateDocName { name: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn parse_score(field: &str, line: u64) -> Result<f64, TsvError> {
    let value = f64::from_str(field).map_err(|_| TsvError::MalformedScore {
        line,
        field: field.to_string(),
    })?;
    if !value.is_finite() {
        return Err(TsvError::MalformedScore { line, field: field.to_string() });
    }
    if !(0.0..=1.0).contains(&value) {
        return Err(TsvError::ScoreOutOfRange { line, value });
    }
    Ok(value)
}

/// Serializes a score with exactly six digits after the decimal point,
/// rounding half to even.
pub fn format_score(value: f64) -> String {
    format!("{value:.6}")
}

/// Streaming corpus parser; yields one [`Document`] per block of
/// consecutive non-empty lines. Memory use is bounded by the largest
/// single document.
pub struct CorpusReader<R> {
    input: R,
    line_no: u64,
    byte_offset: u64,
    buf: Vec<u8>,
    done: bool,
}

impl<R: BufRead> CorpusReader<R> {
    pub fn new(input: R) -> Self {
        CorpusReader { input, line_no: 0, byte_offset: 0, buf: Vec::new(), done: false }
    }

    /// Next line as UTF-8, or `None` at EOF. Trailing `\n` is stripped.
    fn next_line(&mut self) -> Result<Option<String>, TsvError> {
        self.buf.clear();
        let read = self.input.read_until(b'\n', &mut self.buf)?;
        if read == 0 {
            return Ok(None);
        }
        self.line_no += 1;
        let content = match self.buf.last() {
            Some(b'\n') => &self.buf[..self.buf.len() - 1],
            _ => &self.buf[..],
        };
        let text = std::str::from_utf8(content).map_err(|e| TsvError::InvalidUtf8 {
            offset: self.byte_offset + e.valid_up_to() as u64,
        })?;
        self.byte_offset += read as u64;
        Ok(Some(text.to_string()))
    }

    fn parse_line(&self, line: &str) -> Result<SentencePair, TsvError> {
        let line_no = self.line_no;
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 6 {
            return Err(TsvError::MalformedLine { line: line_no, found: fields.len() });
        }
        let id = crate::model::parse_pair_id(fields[0])
            .map_err(|source| TsvError::MalformedId { line: line_no, source })?;
        let adq = parse_score(fields[1], line_no)?;
        let cs_lang = parse_score(fields[2], line_no)?;
        let en_lang = parse_score(fields[3], line_no)?;
        let triple = ScoreTriple::new(adq, cs_lang, en_lang)
            .expect("scores validated against [0, 1] above");
        SentencePair::with_scores(id, fields[4], fields[5], triple)
            .map_err(|source| TsvError::InvalidPair { line: line_no, source })
    }

    fn next_document(&mut self) -> Result<Option<Document>, TsvError> {
        let mut block: Vec<SentencePair> = Vec::new();
        loop {
            let Some(line) = self.next_line()? else {
                break;
            };
            if line.is_empty() {
                if block.is_empty() {
                    continue; // runs of blank lines collapse into one separator
                }
                break;
            }
            let pair = self.parse_line(&line)?;
            if let Some(prev) = block.last() {
                let expected = prev.id().doc_key();
                let found = pair.id().doc_key();
                if found != expected {
                    return Err(TsvError::MixedDocumentBlock { line: self.line_no, expected, found });
                }
                if pair.id().sent() <= prev.id().sent() {
                    return Err(TsvError::NonIncreasingSent { line: self.line_no });
                }
            }
            block.push(pair);
        }
        if block.is_empty() {
            return Ok(None);
        }
        Ok(Some(Document::new(block).expect("block invariants checked per line")))
    }
}

impl<R: BufRead> Iterator for CorpusReader<R> {
    type Item = Result<Document, TsvError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        match self.next_document() {
            Ok(Some(doc)) => Some(Ok(doc)),
            Ok(None) => {
                self.done = true;
                None
            }
            Err(e) => {
                self.done = true;
                Some(Err(e))
            }
        }
    }
}

/// Streaming view over a corpus byte stream.
pub fn parse_corpus<R: BufRead>(input: R) -> CorpusReader<R> {
    CorpusReader::new(input)
}

/// Reads a whole corpus into memory. Convenience for small inputs.
pub fn read_corpus<R: BufRead>(input: R) -> Result<Vec<Document>, TsvError> {
    parse_corpus(input).collect()
}

/// Incremental corpus writer; emits exactly one empty line between
/// consecutive documents and a trailing newline after the last line.
pub struct CorpusWriter<W> {
    out: W,
    any_written: bool,
}

impl<W: Write> CorpusWriter<W> {
    pub fn new(out: W) -> Self {
        CorpusWriter { out, any_written: false }
    }

    pub fn write_document(&mut self, doc: &Document) -> Result<(), TsvError> {
        if self.any_written {
            self.out.write_all(b"\n")?;
        }
        for pair in doc.pairs() {
            let t = pair
                .scores()
                .triple()
                .ok_or_else(|| TsvError::UnscoredPair { id: pair.id().clone() })?;
            writeln!(
                self.out,
                "{}\t{:.6}\t{:.6}\t{:.6}\t{}\t{}",
                pair.id(),
                t.adq(),
                t.cs_lang(),
                t.en_lang(),
                pair.cs_text(),
                pair.en_text()
            )?;
        }
        self.any_written = true;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W, TsvError> {
        self.out.flush()?;
        Ok(self.out)
    }
}

/// Writes all documents in order. Empty input produces empty output.
pub fn write_corpus<'a, I, W>(docs: I, out: W) -> Result<W, TsvError>
where
    I: IntoIterator<Item = &'a Document>,
    W: Write,
{
    let mut writer = CorpusWriter::new(out);
    for doc in docs {
        writer.write_document(doc)?;
    }
    writer.finish()
}

/// A document boundary in raw aligned input: the 0-based sentence index
/// where a new source document starts, with an optional document name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocBreak {
    pub index: usize,
    pub name: Option<String>,
}

/// Two aligned line streams plus the document boundaries between them.
///
/// A line blank on both sides acts as a document separator and is never a
/// sentence; a line blank on one side only is an alignment error. Break
/// indices refer to input line numbers before separators are removed.
#[derive(Debug, Clone)]
pub struct RawBitext {
    cs_lines: Vec<String>,
    en_lines: Vec<String>,
    // sorted by sentence index, names attached; index 0 always present
    breaks: Vec<DocBreak>,
}

impl RawBitext {
    pub fn new(
        cs_lines: Vec<String>,
        en_lines: Vec<String>,
        breaks: Option<Vec<DocBreak>>,
    ) -> Result<Self, TsvError> {
        if cs_lines.len() != en_lines.len() {
            return Err(TsvError::LengthMismatch { cs: cs_lines.len(), en: en_lines.len() });
        }
        let input_len = cs_lines.len();
        let mut kept_cs = Vec::with_capacity(input_len);
        let mut kept_en = Vec::with_capacity(input_len);
        // input line index of each kept sentence
        let mut kept_origin = Vec::with_capacity(input_len);
        let mut inline_breaks: Vec<usize> = Vec::new();
        let mut separator_pending = false;
        for (i, (cs, en)) in cs_lines.into_iter().zip(en_lines).enumerate() {
            match (cs.is_empty(), en.is_empty()) {
                (true, true) => separator_pending = true,
                (true, false) => return Err(TsvError::BlankMismatch { line: i as u64 + 1, side: Side::Cs }),
                (false, true) => return Err(TsvError::BlankMismatch { line: i as u64 + 1, side: Side::En }),
                (false, false) => {
                    if separator_pending {
                        inline_breaks.push(kept_cs.len());
                        separator_pending = false;
                    }
                    kept_cs.push(cs);
                    kept_en.push(en);
                    kept_origin.push(i);
                }
            }
        }

        let mut resolved: Vec<DocBreak> = vec![DocBreak { index: 0, name: None }];
        for index in inline_breaks {
            if index > 0 {
                resolved.push(DocBreak { index, name: None });
            }
        }
        for brk in breaks.unwrap_or_default() {
            if brk.index >= input_len && !(brk.index == 0 && input_len == 0) {
                return Err(TsvError::InvalidBreak {
                    entry: brk.index.to_string(),
                    reason: format!("index out of range for {input_len} input lines"),
                });
            }
            // first kept sentence at or after the input line
            let kept = kept_origin.partition_point(|&orig| orig < brk.index);
            if kept >= kept_cs.len() {
                continue; // break after the last sentence starts no document
            }
            match resolved.iter_mut().find(|b| b.index == kept) {
                Some(existing) => {
                    if existing.name.is_none() {
                        existing.name = brk.name;
                    }
                }
                None => resolved.push(DocBreak { index: kept, name: brk.name }),
            }
        }
        resolved.sort_by_key(|b| b.index);
        resolved.dedup_by(|a, b| a.index == b.index);
        if kept_cs.is_empty() {
            resolved.clear();
        }
        Ok(RawBitext { cs_lines: kept_cs, en_lines: kept_en, breaks: resolved })
    }

    /// Reads two aligned line files and an optional break file. Break file
    /// lines are `<index>` or `<index>\t<name>`, indices 0-based. A
    /// trailing `\r` on input lines is stripped.
    pub fn load<R1, R2, R3>(cs: R1, en: R2, breaks: Option<R3>) -> Result<Self, TsvError>
    where
        R1: BufRead,
        R2: BufRead,
        R3: BufRead,
    {
        let read_lines = |reader: &mut dyn BufRead| -> Result<Vec<String>, TsvError> {
            let mut lines = Vec::new();
            let mut offset = 0u64;
            let mut buf = Vec::new();
            loop {
                buf.clear();
                let read = reader.read_until(b'\n', &mut buf)?;
                if read == 0 {
                    break;
                }
                let mut content = buf.as_slice();
                if content.last() == Some(&b'\n') {
                    content = &content[..content.len() - 1];
                }
                if content.last() == Some(&b'\r') {
                    content = &content[..content.len() - 1];
                }
                let text = std::str::from_utf8(content)
                    .map_err(|e| TsvError::InvalidUtf8 { offset: offset + e.valid_up_to() as u64 })?;
                lines.push(text.to_string());
                offset += read as u64;
            }
            Ok(lines)
        };
        let mut cs = cs;
        let mut en = en;
        let cs_lines = read_lines(&mut cs)?;
        let en_lines = read_lines(&mut en)?;
        let break_list = match breaks {
            None => None,
            Some(mut reader) => {
                let mut list = Vec::new();
                for raw in read_lines(&mut reader)? {
                    if raw.is_empty() {
                        continue;
                    }
                    let (index_text, name) = match raw.split_once('\t') {
                        Some((idx, name)) => (idx, Some(name.to_string())),
                        None => (raw.as_str(), None),
                    };
                    let index: usize = index_text.parse().map_err(|_| TsvError::InvalidBreak {
                        entry: raw.clone(),
                        reason: "index is not a non-negative integer".to_string(),
                    })?;
                    list.push(DocBreak { index, name });
                }
                Some(list)
            }
        };
        RawBitext::new(cs_lines, en_lines, break_list)
    }

    pub fn len(&self) -> usize {
        self.cs_lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cs_lines.is_empty()
    }
}

/// One output file of segmentation: a run of up to `max_len` consecutive
/// sentence pairs from a single source document.
#[derive(Debug, Clone)]
pub struct SegmentedFile<'a> {
    pub doc_index: usize,
    pub doc_name: Option<&'a str>,
    pub file_index: u64,
    raw: &'a RawBitext,
    range: Range<usize>,
}

impl<'a> SegmentedFile<'a> {
    pub fn len(&self) -> usize {
        self.range.len()
    }

    pub fn is_empty(&self) -> bool {
        self.range.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&'a str, &'a str)> + '_ {
        self.raw.cs_lines[self.range.clone()]
            .iter()
            .zip(&self.raw.en_lines[self.range.clone()])
            .map(|(cs, en)| (cs.as_str(), en.as_str()))
    }
}

/// Splits each source document into consecutive files of `max_len`
/// sentences, the last file holding the remainder. File indices start at 0
/// within each document; concatenating all files in order reproduces the
/// input exactly.
pub fn segment_documents(
    raw: &RawBitext,
    max_len: NonZeroUsize,
) -> impl Iterator<Item = SegmentedFile<'_>> {
    let max_len = max_len.get();
    let mut docs: Vec<(usize, usize, Option<&str>)> = Vec::new();
    for (i, brk) in raw.breaks.iter().enumerate() {
        let end = raw.breaks.get(i + 1).map_or(raw.len(), |next| next.index);
        if brk.index < end {
            docs.push((brk.index, end, brk.name.as_deref()));
        }
    }
    docs.into_iter().enumerate().flat_map(move |(doc_index, (start, end, name))| {
        (start..end).step_by(max_len).enumerate().map(move |(file_index, file_start)| {
            SegmentedFile {
                doc_index,
                doc_name: name,
                file_index: file_index as u64,
                raw,
                range: file_start..(file_start + max_len).min(end),
            }
        })
    })
}

/// Turns segmented files into unscored documents under `source`. The doc
/// component is the carried document name when present, `d<doc_index>`
/// otherwise; sentence indices start at 1 within each file. Emitted ids
/// are pairwise distinct across the whole run.
pub fn assign_ids<'a, I>(
    source: &str,
    segments: I,
) -> Result<impl Iterator<Item = Result<Document, TsvError>> + 'a, TsvError>
where
    I: Iterator<Item = SegmentedFile<'a>> + 'a,
{
    // probe the grammar once; per-file ids reuse the validated source
    if PairId::new(source, "d0", 0, 1).is_err() {
        return Err(TsvError::InvalidSource { name: source.to_string() });
    }
    let source = source.to_string();
    let mut seen_docs: std::collections::HashSet<String> = std::collections::HashSet::new();
    let mut last_doc_index: Option<usize> = None;
    Ok(segments.map(move |segment| {
        let doc_name = match segment.doc_name {
            Some(name) => name.to_string(),
            None => format!("d{}", segment.doc_index),
        };
        if last_doc_index != Some(segment.doc_index) {
            last_doc_index = Some(segment.doc_index);
            if !seen_docs.insert(doc_name.clone()) {
                return Err(TsvError::DuplicateDocName { name: doc_name });
            }
        }
        let mut pairs = Vec::with_capacity(segment.len());
        for (offset, (cs, en)) in segment.pairs().enumerate() {
            let id = PairId::new(&source, &doc_name, segment.file_index, offset as u64 + 1)
                .map_err(|source| TsvError::InvalidPair { line: 0, source })?;
            let pair = SentencePair::new(id, cs, en)
                .map_err(|source| TsvError::InvalidPair { line: 0, source })?;
            pairs.push(pair);
        }
        Ok(Document::new(pairs).expect("segment files are non-empty with increasing sent"))
    }))
}

//! Streaming ingestion of 1-gram exports into a [`FrequencyStore`].

mod normalize;
mod parse;
mod token;

use std::borrow::Cow;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Read};
use std::ops::AddAssign;
use std::path::{Path, PathBuf};

use flate2::read::MultiGzDecoder;
use rayon::prelude::*;

pub use normalize::{normalize_token, NormalizationRuleset, Rule};
pub use parse::{parse_ngram_bytes, parse_ngram_line, parse_totals_line, RawNgramRecord};
pub use token::{is_word, word_length, TokenFilterConfig, APOSTROPHE, TYPOGRAPHIC_APOSTROPHE};

use crate::error::Result;
use crate::store::{FrequencyStore, Provenance, StoreBuilder, TokenId, DEFAULT_YEAR_MAX, DEFAULT_YEAR_MIN};

const GZIP_MAGIC: [u8; 2] = [0x1f, 0x8b];
const READ_BUFFER: usize = 1 << 20;

/// Filter plus normalization: turns a raw 1-gram into the stored word, or
/// rejects it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenPipeline {
    pub filter: TokenFilterConfig,
    pub rules: NormalizationRuleset,
}

impl TokenPipeline {
    pub fn new(filter: TokenFilterConfig, rules: NormalizationRuleset) -> Self {
        Self { filter, rules }
    }

    pub fn provenance(&self) -> Provenance {
        Provenance::of(&self.filter, &self.rules)
    }

    /// Returns the normalized form of `raw`, or `None` when it is not a word
    /// before or after normalization.
    pub fn accept<'a>(&self, raw: &'a str) -> Option<Cow<'a, str>> {
        if !is_word(raw, &self.filter) {
            return None;
        }
        let mut token: Cow<'a, str> = Cow::Borrowed(raw);
        if token.contains(TYPOGRAPHIC_APOSTROPHE) {
            token = Cow::Owned(token.replace(TYPOGRAPHIC_APOSTROPHE, "'"));
        }
        if self.filter.case_fold() && token.chars().any(char::is_uppercase) {
            token = Cow::Owned(token.to_lowercase());
        }
        if !self.rules.is_empty() {
            token = match token {
                Cow::Borrowed(s) => normalize_token(s, &self.rules),
                Cow::Owned(s) => Cow::Owned(normalize_token(&s, &self.rules).into_owned()),
            };
        }
        is_word(&token, &self.filter).then_some(token)
    }
}

/// Line counters for one ingest run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestStats {
    pub lines_read: u64,
    pub accepted: u64,
    /// Well-formed, in range, but not a word.
    pub rejected: u64,
    pub malformed: u64,
    pub out_of_range: u64,
    /// Sum of accepted match counts.
    pub accepted_tokens: u128,
}

impl AddAssign for IngestStats {
    fn add_assign(&mut self, rhs: Self) {
        self.lines_read += rhs.lines_read;
        self.accepted += rhs.accepted;
        self.rejected += rhs.rejected;
        self.malformed += rhs.malformed;
        self.out_of_range += rhs.out_of_range;
        self.accepted_tokens += rhs.accepted_tokens;
    }
}

#[derive(Debug, Clone)]
pub struct Ingested {
    pub store: FrequencyStore,
    pub stats: IngestStats,
}

/// Incremental ingester. Feed lines, then [`Ingestor::finish`].
#[derive(Debug)]
pub struct Ingestor {
    pipeline: TokenPipeline,
    builder: StoreBuilder,
    stats: IngestStats,
    // exports are grouped by token, so the previous verdict is usually reusable
    last_raw: String,
    last_id: Option<TokenId>,
    last_valid: bool,
}

impl Ingestor {
    pub fn new(pipeline: TokenPipeline, years: (i32, i32)) -> Result<Self> {
        let builder = StoreBuilder::new(pipeline.provenance(), years.0, years.1)?;
        Ok(Self {
            pipeline,
            builder,
            stats: IngestStats::default(),
            last_raw: String::new(),
            last_id: None,
            last_valid: false,
        })
    }

    pub fn stats(&self) -> &IngestStats {
        &self.stats
    }

    pub fn push_line(&mut self, line: &str) {
        self.stats.lines_read += 1;
        match parse_ngram_line(line) {
            Ok(record) => self.push_record(record),
            Err(_) => self.stats.malformed += 1,
        }
    }

    pub fn push_bytes(&mut self, line: &[u8]) {
        self.stats.lines_read += 1;
        match parse_ngram_bytes(line) {
            Ok(record) => self.push_record(record),
            Err(_) => self.stats.malformed += 1,
        }
    }

    fn push_record(&mut self, record: RawNgramRecord<'_>) {
        if !self.builder.in_range(record.year) {
            self.stats.out_of_range += 1;
            return;
        }
        self.builder.mark_year(record.year).expect("year checked in range");
        if !self.last_valid || self.last_raw != record.token {
            self.last_raw.clear();
            self.last_raw.push_str(record.token);
            self.last_valid = true;
            self.last_id = self.pipeline.accept(record.token).map(|t| self.builder.intern(&t));
        }
        match self.last_id {
            Some(id) => {
                self.builder.add_id(id, record.year, record.match_count).expect("year checked in range");
                self.stats.accepted += 1;
                self.stats.accepted_tokens += u128::from(record.match_count);
            }
            None => self.stats.rejected += 1,
        }
    }

    /// Reads LF or CRLF terminated lines until EOF. I/O errors abort;
    /// malformed lines are counted and skipped.
    pub fn read_from(&mut self, mut reader: impl BufRead) -> Result<()> {
        let mut line = Vec::with_capacity(256);
        loop {
            line.clear();
            if reader.read_until(b'\n', &mut line)? == 0 {
                return Ok(());
            }
            if line.last() == Some(&b'\n') {
                line.pop();
            }
            if line.is_empty() {
                continue;
            }
            self.push_bytes(&line);
        }
    }

    pub fn finish(self) -> Ingested {
        Ingested { store: self.builder.seal(), stats: self.stats }
    }
}

/// Ingests an in-memory sequence of lines. Blank lines are skipped; any
/// other unparseable line is counted as malformed.
pub fn ingest_stream<I>(
    lines: I,
    filter: &TokenFilterConfig,
    rules: &NormalizationRuleset,
    years: (i32, i32),
) -> Result<Ingested>
where
    I: IntoIterator,
    I::Item: AsRef<str>,
{
    let mut ingestor = Ingestor::new(TokenPipeline::new(filter.clone(), rules.clone()), years)?;
    for line in lines {
        let line = line.as_ref();
        if line.is_empty() {
            continue;
        }
        ingestor.push_line(line);
    }
    Ok(ingestor.finish())
}

/// Opens a local file, or standard input for `-`, decompressing gzip when
/// the stream starts with the gzip magic bytes.
pub fn open_input(path: &Path) -> io::Result<Box<dyn BufRead>> {
    let raw: Box<dyn Read> = if path == Path::new("-") { Box::new(io::stdin()) } else { Box::new(File::open(path)?) };
    let mut reader = BufReader::with_capacity(READ_BUFFER, raw);
    let head = reader.fill_buf()?;
    if head.len() >= 2 && head[..2] == GZIP_MAGIC {
        Ok(Box::new(BufReader::with_capacity(READ_BUFFER, MultiGzDecoder::new(reader))))
    } else {
        Ok(Box::new(reader))
    }
}

pub fn ingest_path(path: &Path, pipeline: &TokenPipeline, years: (i32, i32)) -> Result<Ingested> {
    let mut ingestor = Ingestor::new(pipeline.clone(), years)?;
    ingestor.read_from(open_input(path)?)?;
    Ok(ingestor.finish())
}

/// Ingests each path as its own shard on the current rayon pool and merges
/// the partial stores. The result is identical for any pool size.
pub fn ingest_paths(paths: &[PathBuf], pipeline: &TokenPipeline, years: (i32, i32)) -> Result<Ingested> {
    let parts: Vec<Ingested> = paths.par_iter().map(|p| ingest_path(p, pipeline, years)).collect::<Result<_>>()?;
    let mut stats = IngestStats::default();
    let mut stores = Vec::with_capacity(parts.len());
    for part in parts {
        stats += part.stats;
        stores.push(part.store);
    }
    let store = if stores.is_empty() {
        FrequencyStore::empty(pipeline.provenance(), years.0, years.1)
    } else {
        FrequencyStore::merge(stores)?
    };
    Ok(Ingested { store, stats })
}

pub const DEFAULT_YEARS: (i32, i32) = (DEFAULT_YEAR_MIN, DEFAULT_YEAR_MAX);

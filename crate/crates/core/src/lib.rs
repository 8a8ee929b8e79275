//! Diachronic word-frequency statistics.
//!
//! `lexidyn-core` ingests year-stamped 1-gram counts (Google Books Ngram
//! exports or a three-column equivalent) into an immutable
//! [`FrequencyStore`], and computes frequency-weighted average word length
//! over time together with a per-word decomposition of its changes.
//!
//! For a year with relative frequencies `p_i` and lengths `l_i`, the
//! average length is `L = Σ p_i l_i`. When word `k` moves by `Δp_k` and all
//! other words rescale proportionally, `L` changes by exactly
//! `Δp_k / (1 - p_k) · (l_k - L)`; for rare words this is close to
//! `Δp_k · (l_k - L)`, whose sum over the vocabulary equals the total change
//! of `L` between two years.

pub mod error;
pub mod ingest;
pub mod lexicon;
pub mod metrics;
pub mod periods;
pub mod store;

pub use error::{Error, MalformedLine, Result};
pub use ingest::{
    ingest_path, ingest_paths, ingest_stream, is_word, normalize_token, parse_ngram_line, parse_totals_line,
    word_length, IngestStats, Ingested, Ingestor, NormalizationRuleset, RawNgramRecord, Rule, TokenFilterConfig,
    TokenPipeline,
};
pub use lexicon::{classify, split_by_length, ClassLabel, LengthPredicate, Lexicon, WordClassList};
pub use metrics::{
    average_word_length, band_contributions, contribution_exact, contribution_linear, interval_contributions,
    interval_contributions_smoothed, length_series, smooth, vocabulary_series, ContributionRecord, LengthBand,
    LengthBandSummary, LengthSeries, LinearFit, VocabSeries, WordFilter,
};
pub use periods::{
    default_breakpoints, presence_matrix, segment, top_contributors, word_set_series, Metric, PeriodSpec,
    PresenceMatrix, Sign, TokenSeries, TopKQuery, TopKRow, TopKTable,
};
pub use store::{load_cache, save_cache, FrequencyStore, Provenance, StoreBuilder, TokenId, WordEntry, YearSlice};

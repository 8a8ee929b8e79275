//! The `lexidyn` command line: builds caches from 1-gram exports and writes
//! analyses of them as CSV.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, CommandFactory, Parser, Subcommand};
use lexidyn_core::*;

use output::{fmt_num, fmt_opt, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_EMPTY_BUILD: i32 = 2;
pub const EXIT_SELECTION: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

/// A message plus the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self { code: EXIT_IO, message: message.into() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Io(_)
            | Error::MalformedLine(_)
            | Error::CorruptCache(_)
            | Error::CacheVersionMismatch { .. }
            | Error::ProvenanceMismatch { .. } => EXIT_IO,
            Error::YearAbsent(_) | Error::EmptySelection(_) | Error::DegenerateDistribution => EXIT_SELECTION,
            Error::InvalidArgument(_)
            | Error::EmptyList(_)
            | Error::InvalidBreakpoints(_)
            | Error::SettingsMismatch(_)
            | Error::InvalidRuleset(_)
            | Error::InvalidFilter(_) => EXIT_USAGE,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::io(e.to_string())
    }
}

type Outcome<T = ()> = std::result::Result<T, Failure>;

#[derive(Debug, Parser)]
#[command(
    name = "lexidyn",
    version,
    about = "Diachronic average word length from 1-gram frequency data",
    after_help = "Exit codes: 0 ok, 1 I/O or cache error, 2 empty build, 3 absent year or empty selection, 4 bad flags.\n\
                  Config files hold one key=value per line; keys are long flag names, `#` starts a comment."
)]
pub struct Cli {
    /// Flat key=value file giving defaults for long flags; flags on the
    /// command line win [default: none]
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Ingest 1-gram files into a cache
    Build(BuildArgs),
    /// Average word length per year: year,avg_length
    Series(SeriesArgs),
    /// Distinct words per year above a frequency threshold: year,count,fitted
    Vocab(VocabArgs),
    /// Per-word contributions over a period:
    /// token,length,class,p_start,p_end,delta_p,baseline_l,dl_linear,dl_exact
    Contrib(ContribArgs),
    /// Largest contributors over a period: rank,token,dl_linear,dl_exact
    Topk(TopkArgs),
    /// Contributions summed by word length: length,signed_sum,share
    Bands(BandsArgs),
    /// Relative frequency of chosen words: token,year,freq
    Words(WordsArgs),
    /// Which top contributors appear in which period: token,<period>...
    Presence(PresenceArgs),
}

#[derive(Debug, Args)]
struct BuildArgs {
    /// Input files (plain or gzip); `-` reads stdin
    #[arg(short, long = "input", value_name = "PATH", num_args = 1.., default_value = "-")]
    input: Vec<PathBuf>,
    /// Cache file to write
    #[arg(
        short,
        long,
        visible_alias = "cache",
        short_alias = 'c',
        env = "LEXIDYN_CACHE",
        default_value = "lexidyn.lxdn"
    )]
    output: PathBuf,
    /// Language tag selecting the letter scripts (en: Latin, ru: Cyrillic, other: both)
    #[arg(long, default_value = "en")]
    lang: String,
    /// Normalization ruleset: `empty`, `r1918`, or a ruleset file
    #[arg(long, default_value = "empty")]
    ruleset: String,
    /// Years to keep, FIRST:LAST
    #[arg(long, default_value = "1800:2008", value_parser = parse_range)]
    years: (i32, i32),
    /// Lowercase tokens before counting [default: off]
    #[arg(long)]
    case_fold: bool,
    /// Google totals file; reported next to the word totals, not used for counting [default: none]
    #[arg(long, value_name = "PATH")]
    totals: Option<PathBuf>,
    /// Worker threads, one input file each; 0 uses all cores
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Debug, Args)]
struct Common {
    /// Cache file to read
    #[arg(short, long, env = "LEXIDYN_CACHE", default_value = "lexidyn.lxdn", value_name = "PATH")]
    cache: PathBuf,
    /// Output file; `-` is stdout
    #[arg(long, default_value = "-", value_name = "PATH")]
    out: PathBuf,
    /// Worker threads for per-year work; 0 uses all cores (output is unaffected)
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Debug, Args)]
struct ClassArgs {
    /// Language of the shipped word-class lists; `auto` picks ru for Cyrillic-only caches, else en
    #[arg(long, default_value = "auto")]
    lang: String,
    /// Function-word list replacing the shipped one [default: shipped list]
    #[arg(long, value_name = "PATH")]
    function_list: Option<PathBuf>,
    /// Personal-pronoun list replacing the shipped one [default: shipped list]
    #[arg(long, value_name = "PATH")]
    pronoun_list: Option<PathBuf>,
    /// Extra class list NAME=PATH, usable as `custom:NAME` (repeatable) [default: none]
    #[arg(long, value_name = "NAME=PATH")]
    class_list: Vec<String>,
}

#[derive(Debug, Args)]
struct FilterArgs {
    /// Words to include: all, short, long, function, content, pronoun-personal, custom:NAME
    #[arg(long, default_value = "all")]
    filter: String,
    /// Short words have at most this many letters
    #[arg(long, default_value_t = lexicon::DEFAULT_CUTOFF)]
    cutoff: u32,
}

#[derive(Debug, Args)]
struct SeriesArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    filter: FilterArgs,
    #[command(flatten)]
    classes: ClassArgs,
    /// Years, FIRST:LAST or `all` (every year in the cache)
    #[arg(long, default_value = "all", value_parser = parse_span)]
    years: Span,
    /// Centered moving-average half-width in years
    #[arg(long, default_value_t = 0)]
    smooth: u32,
}

#[derive(Debug, Args)]
struct VocabArgs {
    #[command(flatten)]
    common: Common,
    /// Years, FIRST:LAST or `all`
    #[arg(long, default_value = "all", value_parser = parse_span)]
    years: Span,
    /// Minimum relative frequency for a word to be counted
    #[arg(long, default_value_t = metrics::DEFAULT_MIN_REL_FREQ)]
    threshold: f64,
}

#[derive(Debug, Args)]
struct PeriodArgs {
    /// Interval START:END, or `all` (first to last year in the cache)
    #[arg(long, default_value = "all", value_parser = parse_span)]
    period: Span,
    /// Endpoint smoothing half-width in years
    #[arg(long, default_value_t = 0)]
    smooth: u32,
}

#[derive(Debug, Args)]
struct ContribArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    filter: FilterArgs,
    #[command(flatten)]
    classes: ClassArgs,
    #[command(flatten)]
    period: PeriodArgs,
}

#[derive(Debug, Args)]
struct RankArgs {
    /// Rows per table
    #[arg(short, long, default_value_t = 10)]
    k: usize,
    /// increase, decrease or both
    #[arg(long, default_value = "both")]
    sign: String,
    /// Only show words of this class (function, content, pronoun-personal, custom:NAME) [default: any]
    #[arg(long)]
    class: Option<String>,
    /// Ranking metric: linear or exact
    #[arg(long, default_value = "linear")]
    metric: String,
}

#[derive(Debug, Args)]
struct TopkArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    classes: ClassArgs,
    #[command(flatten)]
    period: PeriodArgs,
    #[command(flatten)]
    rank: RankArgs,
}

#[derive(Debug, Args)]
struct BandsArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    filter: FilterArgs,
    #[command(flatten)]
    classes: ClassArgs,
    #[command(flatten)]
    period: PeriodArgs,
    /// Report signed sums only and leave the share column empty [default: off]
    #[arg(long)]
    raw: bool,
}

#[derive(Debug, Args)]
struct WordsArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated tokens (required)
    #[arg(short, long, value_delimiter = ',', required = true)]
    tokens: Vec<String>,
    /// Years, FIRST:LAST or `all`
    #[arg(long, default_value = "all", value_parser = parse_span)]
    years: Span,
    /// Centered moving-average half-width in years
    #[arg(long, default_value_t = 0)]
    smooth: u32,
}

#[derive(Debug, Args)]
struct PresenceArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    classes: ClassArgs,
    #[command(flatten)]
    rank: RankArgs,
    /// Comma-separated period boundaries
    #[arg(long, default_value = "1800,1825,1850,1875,1900,1925,1950,1975,2000,2008", value_delimiter = ',')]
    breakpoints: Vec<i32>,
    /// Endpoint smoothing half-width in years
    #[arg(long, default_value_t = 0)]
    smooth: u32,
}

/// A year range, or every year in the cache.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Span {
    All,
    Range(i32, i32),
}

fn parse_range(s: &str) -> std::result::Result<(i32, i32), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected FIRST:LAST, got {s:?}"))?;
    let a: i32 = a.trim().parse().map_err(|_| format!("bad year {a:?}"))?;
    let b: i32 = b.trim().parse().map_err(|_| format!("bad year {b:?}"))?;
    if a > b {
        return Err(format!("{a} is after {b}"));
    }
    Ok((a, b))
}

fn parse_span(s: &str) -> std::result::Result<Span, String> {
    if s == "all" {
        Ok(Span::All)
    } else {
        parse_range(s).map(|(a, b)| Span::Range(a, b))
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the exit code. Diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let result = config::apply(args, &Cli::command()).and_then(|args| match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(cli, stdout, stderr),
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = stdout.write_all(text.as_bytes());
                Ok(())
            } else {
                Err(Failure::usage(text.trim_end().trim_start_matches("error: ")))
            }
        }
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "lexidyn: {}", f.message);
            f.code
        }
    }
}

fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Outcome<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::usage(format!("cannot start {threads} threads: {e}")))?;
    Ok(pool.install(f))
}

fn dispatch(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    let plain = |r: Outcome<Table>| r.map(|t| (t, None));
    match cli.command {
        Cmd::Build(a) => build(a, stdout),
        Cmd::Series(a) => analysis(&a.common, stdout, stderr, |s| plain(series(s, &a))),
        Cmd::Vocab(a) => analysis(&a.common, stdout, stderr, |s| vocab(s, &a)),
        Cmd::Contrib(a) => analysis(&a.common, stdout, stderr, |s| plain(contrib(s, &a))),
        Cmd::Topk(a) => analysis(&a.common, stdout, stderr, |s| plain(topk(s, &a))),
        Cmd::Bands(a) => analysis(&a.common, stdout, stderr, |s| plain(bands(s, &a))),
        Cmd::Words(a) => analysis(&a.common, stdout, stderr, |s| plain(words(s, &a))),
        Cmd::Presence(a) => analysis(&a.common, stdout, stderr, |s| plain(presence(s, &a))),
    }
}

/// Loads the cache, runs `body` on the configured thread pool, and writes
/// its table plus an optional note for stderr.
fn analysis(
    common: &Common,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
    body: impl FnOnce(&FrequencyStore) -> Outcome<(Table, Option<String>)> + Send,
) -> Outcome {
    let store = load_cache(&common.cache).map_err(|e| {
        let f = Failure::from(e);
        Failure { code: EXIT_IO, message: format!("{}: {}", common.cache.display(), f.message) }
    })?;
    let (table, note) = with_threads(common.threads, || body(&store))??;
    table.emit(&common.out, stdout).map_err(|e| Failure::io(format!("{}: {e}", common.out.display())))?;
    if let Some(note) = note {
        writeln!(stderr, "{note}")?;
    }
    Ok(())
}

fn load_ruleset(spec: &str) -> Outcome<NormalizationRuleset> {
    if let Some(rules) = NormalizationRuleset::builtin(spec) {
        return Ok(rules);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(Failure::usage(format!("unknown ruleset {spec:?} (not a built-in id or a file)")));
    }
    NormalizationRuleset::load(path).map_err(|e| match e {
        Error::Io(e) => Failure::io(format!("{spec}: {e}")),
        other => Failure::usage(format!("{spec}: {other}")),
    })
}

fn build(a: BuildArgs, stdout: &mut dyn Write) -> Outcome {
    let rules = load_ruleset(&a.ruleset)?;
    let filter = TokenFilterConfig::for_language(&a.lang).with_case_fold(a.case_fold);
    let pipeline = TokenPipeline::new(filter, rules);
    for path in a.input.iter().filter(|p| p.as_os_str() != "-") {
        if !path.is_file() {
            return Err(Failure::io(format!("{}: no such file", path.display())));
        }
    }
    let Ingested { store, stats } = with_threads(a.threads, || ingest_paths(&a.input, &pipeline, a.years))??;

    let mut report = String::new();
    let mut line = |k: &str, v: String| report.push_str(&format!("{k:<14}{v}\n"));
    line("lines read", stats.lines_read.to_string());
    line("accepted", stats.accepted.to_string());
    line("rejected", stats.rejected.to_string());
    line("malformed", stats.malformed.to_string());
    line("out of range", stats.out_of_range.to_string());
    line("word tokens", stats.accepted_tokens.to_string());
    line("words", store.words().len().to_string());
    let years: Vec<i32> = store.years().collect();
    match (years.first(), years.last()) {
        (Some(first), Some(last)) => line("years", format!("{} ({first}-{last})", years.len())),
        _ => line("years", "0".into()),
    }
    if let Some(totals) = &a.totals {
        let raw = read_totals(totals, a.years)?;
        let share = if raw == 0 {
            String::new()
        } else {
            format!(" (words {})", fmt_num(stats.accepted_tokens as f64 / raw as f64))
        };
        line("raw totals", format!("{raw}{share}"));
    }
    if store.grand_total() == 0 {
        stdout.write_all(report.as_bytes())?;
        return Err(Failure { code: EXIT_EMPTY_BUILD, message: "no words were accepted; cache not written".into() });
    }
    save_cache(&store, &a.output).map_err(|e| Failure::io(format!("{}: {e}", a.output.display())))?;
    line("cache", a.output.display().to_string());
    stdout.write_all(report.as_bytes())?;
    Ok(())
}

/// Sum of raw match counts over `years` in a Google totals file.
fn read_totals(path: &Path, years: (i32, i32)) -> Outcome<u128> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    let mut sum = 0u128;
    for line in text.lines() {
        let entries = parse_totals_line(line).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
        for (year, count) in entries {
            if (years.0..=years.1).contains(&year) {
                sum += u128::from(count);
            }
        }
    }
    Ok(sum)
}

/// The ingest pipeline a cache was built with, so list entries are folded
/// the same way as the counted tokens. Caches built from a ruleset file
/// fall back to no normalization for lists.
fn pipeline_of(store: &FrequencyStore) -> Outcome<TokenPipeline> {
    let prov = store.provenance();
    let filter = if prov.filter_id().is_empty() {
        TokenFilterConfig::default()
    } else {
        TokenFilterConfig::from_id(prov.filter_id()).map_err(|e| Failure::io(format!("cache provenance: {e}")))?
    };
    let rules = NormalizationRuleset::builtin(prov.ruleset_id()).unwrap_or_else(NormalizationRuleset::empty);
    Ok(TokenPipeline::new(filter, rules))
}

fn lexicon(store: &FrequencyStore, a: &ClassArgs) -> Outcome<Lexicon> {
    let pipeline = pipeline_of(store)?;
    let lang = match a.lang.as_str() {
        "auto" => {
            if pipeline.filter.id().starts_with("scripts=Cyrillic;") {
                "ru"
            } else {
                "en"
            }
        }
        other => other,
    };
    let load = |path: &Path, label: ClassLabel| {
        WordClassList::load(path, lang, label, &pipeline).map_err(|e| match e {
            Error::Io(io) => Failure::io(format!("{}: {io}", path.display())),
            other => Failure::from(other),
        })
    };
    let shipped = Lexicon::shipped(lang, &pipeline)?;
    let mut lists = Vec::new();
    for list in shipped.lists() {
        let replacement = match list.label() {
            ClassLabel::Function => a.function_list.as_deref(),
            ClassLabel::PronounPersonal => a.pronoun_list.as_deref(),
            _ => None,
        };
        lists.push(match replacement {
            Some(path) => load(path, list.label().clone())?,
            None => list.clone(),
        });
    }
    for spec in &a.class_list {
        let (name, path) = spec
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("--class-list expects NAME=PATH, got {spec:?}")))?;
        lists.push(load(Path::new(path), ClassLabel::Custom(name.to_string()))?);
    }
    Ok(Lexicon::new(lists))
}

fn word_filter(store: &FrequencyStore, f: &FilterArgs, classes: &ClassArgs) -> Outcome<WordFilter> {
    Ok(match f.filter.as_str() {
        "all" => WordFilter::All,
        "short" | "long" => {
            let (short, _) = split_by_length(f.cutoff)?;
            if f.filter == "short" {
                WordFilter::Short(short.cutoff())
            } else {
                WordFilter::Long(short.cutoff())
            }
        }
        other => {
            let label: ClassLabel = other.parse()?;
            let lex = lexicon(store, classes)?;
            check_class(&lex, &label)?;
            WordFilter::Class(Arc::new(lex), label)
        }
    })
}

/// Custom classes must name a `--class-list`.
fn check_class(lex: &Lexicon, label: &ClassLabel) -> Outcome {
    if matches!(label, ClassLabel::Custom(_)) && !lex.lists().iter().any(|l| l.label() == label) {
        return Err(Failure::usage(format!("class {label} has no --class-list")));
    }
    Ok(())
}

/// Present years within `span`.
fn years_in(store: &FrequencyStore, span: Span) -> Outcome<Vec<i32>> {
    let years: Vec<i32> = match span {
        Span::All => store.years().collect(),
        Span::Range(a, b) => store.years().filter(|y| (a..=b).contains(y)).collect(),
    };
    if years.is_empty() {
        let first = match span {
            Span::All => store.year_min(),
            Span::Range(a, _) => a,
        };
        return Err(Error::YearAbsent(first).into());
    }
    Ok(years)
}

/// Present years a smoothed value for any of `keep` draws on.
fn smoothing_years(store: &FrequencyStore, keep: &[i32], window: u32) -> Vec<i32> {
    let (lo, hi) = (keep[0].saturating_sub_unsigned(window), keep[keep.len() - 1].saturating_add_unsigned(window));
    store.years().filter(|y| (lo..=hi).contains(y)).collect()
}

fn period_of(store: &FrequencyStore, span: Span) -> Outcome<PeriodSpec> {
    let (start, end) = match span {
        Span::All => {
            let years = years_in(store, span)?;
            (years[0], *years.last().expect("non-empty"))
        }
        Span::Range(a, b) => (a, b),
    };
    PeriodSpec::new(start, end)
        .map_err(|_| Failure::usage(format!("period {start}:{end} must span at least two years")))
}

fn series(store: &FrequencyStore, a: &SeriesArgs) -> Outcome<Table> {
    let filter = word_filter(store, &a.filter, &a.classes)?;
    let keep = years_in(store, a.years)?;
    let series = length_series(store, &smoothing_years(store, &keep, a.smooth), a.smooth, &filter)?;
    let mut t = Table::new(&["year", "avg_length"]);
    for (year, l) in series.points.into_iter().filter(|(y, _)| keep.binary_search(y).is_ok()) {
        t.row([year.to_string(), fmt_num(l)]);
    }
    Ok(t)
}

fn vocab(store: &FrequencyStore, a: &VocabArgs) -> Outcome<(Table, Option<String>)> {
    if !(a.threshold.is_finite() && a.threshold >= 0.0) {
        return Err(Failure::usage(format!("threshold must be a non-negative number, got {}", a.threshold)));
    }
    let v = vocabulary_series(store, &years_in(store, a.years)?, a.threshold)?;
    let mut t = Table::new(&["year", "count", "fitted"]);
    for &(year, n) in &v.points {
        t.row([year.to_string(), n.to_string(), fmt_opt(v.fit.map(|f| f.predict(f64::from(year))))]);
    }
    Ok((t, v.fit.map(|fit| format!("slope {} words/year", fmt_num(fit.slope)))))
}

fn contrib(store: &FrequencyStore, a: &ContribArgs) -> Outcome<Table> {
    let filter = word_filter(store, &a.filter, &a.classes)?;
    let lex = lexicon(store, &a.classes)?;
    let p = period_of(store, a.period.period)?;
    let records = interval_contributions_smoothed(store, p.start, p.end, a.period.smooth, &filter)?;
    let mut t =
        Table::new(&["token", "length", "class", "p_start", "p_end", "delta_p", "baseline_l", "dl_linear", "dl_exact"]);
    for r in records {
        t.row([
            r.token.clone(),
            r.length.to_string(),
            lex.classify(&r.token).as_str().to_string(),
            fmt_num(r.p_start),
            fmt_num(r.p_end),
            fmt_num(r.delta_p),
            fmt_num(r.baseline_l),
            fmt_num(r.dl_linear),
            fmt_opt(r.dl_exact),
        ]);
    }
    Ok(t)
}

fn query(r: &RankArgs, window: u32, lex: &Lexicon) -> Outcome<TopKQuery> {
    let class: Option<ClassLabel> = r.class.as_deref().map(str::parse).transpose()?;
    if let Some(label) = &class {
        check_class(lex, label)?;
    }
    Ok(TopKQuery { k: r.k, sign: r.sign.parse()?, class, metric: r.metric.parse()?, window })
}

fn topk(store: &FrequencyStore, a: &TopkArgs) -> Outcome<Table> {
    let lex = lexicon(store, &a.classes)?;
    let q = query(&a.rank, a.period.smooth, &lex)?;
    let table = top_contributors(store, &period_of(store, a.period.period)?, &q, &lex)?;
    let mut t = Table::new(&["rank", "token", "dl_linear", "dl_exact"]);
    for row in table.rows {
        t.row([row.rank.to_string(), row.token, fmt_num(row.dl_linear), fmt_opt(row.dl_exact)]);
    }
    Ok(t)
}

fn bands(store: &FrequencyStore, a: &BandsArgs) -> Outcome<Table> {
    let filter = word_filter(store, &a.filter, &a.classes)?;
    let p = period_of(store, a.period.period)?;
    let records = interval_contributions_smoothed(store, p.start, p.end, a.period.smooth, &filter)?;
    let summary = band_contributions(&records, !a.raw)?;
    let mut t = Table::new(&["length", "signed_sum", "share"]);
    for b in summary.bands {
        t.row([b.length.to_string(), fmt_num(b.signed_sum), fmt_opt(b.share)]);
    }
    Ok(t)
}

fn words(store: &FrequencyStore, a: &WordsArgs) -> Outcome<Table> {
    let pipeline = pipeline_of(store)?;
    let tokens: Vec<String> = a
        .tokens
        .iter()
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| pipeline.accept(t).map_or_else(|| t.to_string(), |w| w.into_owned()))
        .collect();
    if tokens.is_empty() {
        return Err(Failure::usage("no tokens given"));
    }
    let keep = years_in(store, a.years)?;
    let series = word_set_series(store, &tokens, &smoothing_years(store, &keep, a.smooth), a.smooth)?;
    let mut t = Table::new(&["token", "year", "freq"]);
    for s in series {
        for (year, p) in s.points.into_iter().filter(|(y, _)| keep.binary_search(y).is_ok()) {
            t.row([s.token.clone(), year.to_string(), fmt_num(p)]);
        }
    }
    Ok(t)
}

fn presence(store: &FrequencyStore, a: &PresenceArgs) -> Outcome<Table> {
    let lex = lexicon(store, &a.classes)?;
    let q = query(&a.rank, a.smooth, &lex)?;
    let periods = segment(store.year_min(), store.year_max(), &a.breakpoints)?;
    let tables = periods.iter().map(|p| top_contributors(store, p, &q, &lex)).collect::<Result<Vec<_>>>()?;
    let matrix = presence_matrix(&tables)?;
    let header: Vec<&str> = std::iter::once("token").chain(matrix.periods.iter().map(|p| p.label.as_str())).collect();
    let mut t = Table::new(&header);
    for (token, marks) in &matrix.rows {
        t.row(std::iter::once(token.as_str()).chain(marks.iter().map(|&m| if m { "+" } else { "" })));
    }
    Ok(t)
}

//! Period tables: top contributors per period, their persistence across
//! periods, and frequency series for chosen words.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lexicon::{ClassLabel, Lexicon};
use crate::metrics::{interval_contributions_smoothed, smooth, ContributionRecord, WordFilter};
use crate::store::FrequencyStore;

/// 1800, 1825, ..., 2000, 2008.
pub fn default_breakpoints() -> Vec<i32> {
    let mut b: Vec<i32> = (1800..=2000).step_by(25).collect();
    b.push(2008);
    b
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PeriodSpec {
    pub start: i32,
    pub end: i32,
    pub label: String,
}

impl PeriodSpec {
    pub fn new(start: i32, end: i32) -> Result<Self> {
        if start >= end {
            return Err(Error::InvalidBreakpoints(format!("period {start}-{end} is empty")));
        }
        Ok(Self { start, end, label: format!("{start}-{end}") })
    }
}

impl fmt::Display for PeriodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Consecutive periods `[b_i, b_{i+1}]`.
pub fn segment(year_min: i32, year_max: i32, breakpoints: &[i32]) -> Result<Vec<PeriodSpec>> {
    if breakpoints.len() < 2 {
        return Err(Error::InvalidBreakpoints("need at least two breakpoints".into()));
    }
    if let Some(b) = breakpoints.iter().find(|b| !(year_min..=year_max).contains(*b)) {
        return Err(Error::InvalidBreakpoints(format!("{b} outside {year_min}..={year_max}")));
    }
    breakpoints.windows(2).map(|w| PeriodSpec::new(w[0], w[1])).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Increase,
    Decrease,
    Both,
}

impl Sign {
    fn admits(self, value: f64) -> bool {
        match self {
            Sign::Increase => value > 0.0,
            Sign::Decrease => value < 0.0,
            Sign::Both => value != 0.0,
        }
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "increase" => Ok(Sign::Increase),
            "decrease" => Ok(Sign::Decrease),
            "both" => Ok(Sign::Both),
            _ => Err(Error::InvalidArgument(format!("unknown sign {s:?}"))),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Increase => "increase",
            Sign::Decrease => "decrease",
            Sign::Both => "both",
        })
    }
}

/// Which contribution a table is ranked by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Metric {
    #[default]
    Linear,
    Exact,
}

impl Metric {
    pub fn of(self, record: &ContributionRecord) -> Option<f64> {
        match self {
            Metric::Linear => Some(record.dl_linear),
            Metric::Exact => record.dl_exact,
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Metric::Linear),
            "exact" => Ok(Metric::Exact),
            _ => Err(Error::InvalidArgument(format!("unknown metric {s:?}"))),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Linear => "linear",
            Metric::Exact => "exact",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TopKQuery {
    pub k: usize,
    pub sign: Sign,
    /// `None` keeps every class.
    pub class: Option<ClassLabel>,
    pub metric: Metric,
    /// Endpoint smoothing window in years.
    pub window: u32,
}

impl Default for TopKQuery {
    fn default() -> Self {
        Self { k: 10, sign: Sign::Both, class: None, metric: Metric::Linear, window: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopKRow {
    pub rank: usize,
    pub token: String,
    pub dl_linear: f64,
    pub dl_exact: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopKTable {
    pub period: PeriodSpec,
    pub query: TopKQuery,
    pub rows: Vec<TopKRow>,
}

/// Ranks the words that moved average length most over `period`.
///
/// Contributions are computed over the whole vocabulary, so the baseline is
/// the overall average length; the class filter only selects which rows are
/// shown. Rows are ordered by decreasing magnitude of the chosen metric,
/// ties by token.
pub fn top_contributors(
    store: &FrequencyStore,
    period: &PeriodSpec,
    query: &TopKQuery,
    lexicon: &Lexicon,
) -> Result<TopKTable> {
    if query.k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let records = interval_contributions_smoothed(store, period.start, period.end, query.window, &WordFilter::All)?;
    let rows = rank(records, query, lexicon);
    Ok(TopKTable { period: period.clone(), query: query.clone(), rows })
}

fn rank(records: Vec<ContributionRecord>, query: &TopKQuery, lexicon: &Lexicon) -> Vec<TopKRow> {
    let mut scored: Vec<(f64, ContributionRecord)> = records
        .into_iter()
        .filter(|r| query.class.as_ref().is_none_or(|c| c.includes(lexicon.classify(&r.token))))
        .filter_map(|r| query.metric.of(&r).filter(|&v| query.sign.admits(v)).map(|v| (v, r)))
        .collect();
    scored.sort_by(|(va, ra), (vb, rb)| vb.abs().total_cmp(&va.abs()).then_with(|| ra.token.cmp(&rb.token)));
    scored
        .into_iter()
        .take(query.k)
        .enumerate()
        .map(|(i, (_, r))| TopKRow { rank: i + 1, token: r.token, dl_linear: r.dl_linear, dl_exact: r.dl_exact })
        .collect()
}

/// Which tokens appear in which period's table.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PresenceMatrix {
    pub periods: Vec<PeriodSpec>,
    /// Rows ordered by first period of appearance, then token.
    pub rows: Vec<(String, Vec<bool>)>,
}

impl PresenceMatrix {
    pub fn marks(&self, token: &str) -> Option<&[bool]> {
        self.rows.iter().find(|(t, _)| t == token).map(|(_, m)| m.as_slice())
    }
}

/// Builds the token × period grid from tables over consecutive,
/// non-overlapping periods computed with identical settings.
pub fn presence_matrix(tables: &[TopKTable]) -> Result<PresenceMatrix> {
    let Some(first) = tables.first() else {
        return Ok(PresenceMatrix::default());
    };
    for pair in tables.windows(2) {
        if pair[1].query != first.query {
            return Err(Error::SettingsMismatch(format!(
                "table {} uses {:?}, table {} uses {:?}",
                first.period, first.query, pair[1].period, pair[1].query
            )));
        }
        if pair[0].period.end > pair[1].period.start {
            return Err(Error::SettingsMismatch(format!(
                "periods {} and {} overlap or are out of order",
                pair[0].period, pair[1].period
            )));
        }
    }
    let mut first_seen: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, table) in tables.iter().enumerate() {
        for row in &table.rows {
            first_seen.entry(row.token.as_str()).or_insert(i);
        }
    }
    let mut order: Vec<(usize, &str)> = first_seen.into_iter().map(|(t, i)| (i, t)).collect();
    order.sort();
    let rows = order
        .into_iter()
        .map(|(_, token)| {
            let marks = tables.iter().map(|t| t.rows.iter().any(|r| r.token == token)).collect();
            (token.to_string(), marks)
        })
        .collect();
    Ok(PresenceMatrix { periods: tables.iter().map(|t| t.period.clone()).collect(), rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TokenSeries {
    pub token: String,
    pub points: Vec<(i32, f64)>,
}

/// Relative frequency of each token over `years`, smoothed with a centered
/// window of `window` years. Tokens are looked up as given.
pub fn word_set_series(
    store: &FrequencyStore,
    tokens: &[impl AsRef<str>],
    years: &[i32],
    window: u32,
) -> Result<Vec<TokenSeries>> {
    let mut years = years.to_vec();
    years.sort_unstable();
    years.dedup();
    tokens
        .iter()
        .map(|token| {
            let token = token.as_ref();
            let raw = years.iter().map(|&y| store.frequency(token, y).map(|p| (y, p))).collect::<Result<Vec<_>>>()?;
            Ok(TokenSeries { token: token.to_string(), points: smooth(&raw, window) })
        })
        .collect()
}

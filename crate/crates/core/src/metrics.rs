//! Average word length and its decomposition into per-word contributions.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lexicon::{ClassLabel, Lexicon};
use crate::store::{FrequencyStore, TokenId, WordEntry};

/// Default minimum relative frequency for a word to count towards the
/// vocabulary of a year.
pub const DEFAULT_MIN_REL_FREQ: f64 = 1e-9;

/// Selects the words a statistic is computed over. Frequencies are
/// renormalized over the selection.
#[derive(Debug, Clone, Default)]
pub enum WordFilter {
    #[default]
    All,
    /// Words of at most `cutoff` letters.
    Short(u32),
    /// Words longer than `cutoff` letters.
    Long(u32),
    /// Words whose lexicon class falls under the label; `function` also
    /// takes in personal pronouns.
    Class(Arc<Lexicon>, ClassLabel),
}

impl WordFilter {
    pub fn accepts(&self, word: &WordEntry) -> bool {
        match self {
            WordFilter::All => true,
            WordFilter::Short(cutoff) => word.length() <= *cutoff,
            WordFilter::Long(cutoff) => word.length() > *cutoff,
            WordFilter::Class(lexicon, label) => label.includes(lexicon.classify(word.token())),
        }
    }

    /// Per-word acceptance over the store's word table.
    pub fn mask(&self, store: &FrequencyStore) -> Vec<bool> {
        store.words().iter().map(|w| self.accepts(w)).collect()
    }

    pub fn id(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for WordFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordFilter::All => f.write_str("all"),
            WordFilter::Short(c) => write!(f, "short<={c}"),
            WordFilter::Long(c) => write!(f, "long>{c}"),
            WordFilter::Class(_, label) => write!(f, "class={label}"),
        }
    }
}

fn mean_length(store: &FrequencyStore, year: i32, mask: &[bool], filter: &WordFilter) -> Result<f64> {
    let slice = store.slice(year)?;
    let (mut letters, mut tokens) = (0u128, 0u128);
    for &(id, count) in slice.counts() {
        if mask[id as usize] {
            letters += u128::from(count) * u128::from(store.word(id).length());
            tokens += u128::from(count);
        }
    }
    if tokens == 0 {
        return Err(Error::EmptySelection(format!("no `{filter}` words in {year}")));
    }
    Ok(letters as f64 / tokens as f64)
}

/// Frequency-weighted mean length of the words selected by `filter` in
/// `year`.
pub fn average_word_length(store: &FrequencyStore, year: i32, filter: &WordFilter) -> Result<f64> {
    mean_length(store, year, &filter.mask(store), filter)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LengthSeries {
    pub points: Vec<(i32, f64)>,
    pub window: u32,
    pub filter_id: String,
}

/// Centered moving average: each point becomes the mean of the values whose
/// years fall within `window` of it. Edges use the points that exist.
pub fn smooth(points: &[(i32, f64)], window: u32) -> Vec<(i32, f64)> {
    if window == 0 {
        return points.to_vec();
    }
    let w = i64::from(window);
    let mut lo = 0;
    let mut hi = 0;
    points
        .iter()
        .map(|&(year, _)| {
            let y = i64::from(year);
            while i64::from(points[lo].0) < y - w {
                lo += 1;
            }
            while hi < points.len() && i64::from(points[hi].0) <= y + w {
                hi += 1;
            }
            let sum: f64 = points[lo..hi].iter().map(|&(_, v)| v).sum();
            (year, sum / (hi - lo) as f64)
        })
        .collect()
}

fn sorted_years(years: &[i32]) -> Vec<i32> {
    let mut years = years.to_vec();
    years.sort_unstable();
    years.dedup();
    years
}

/// Average word length for each requested year, optionally smoothed.
pub fn length_series(store: &FrequencyStore, years: &[i32], window: u32, filter: &WordFilter) -> Result<LengthSeries> {
    let mask = filter.mask(store);
    let raw = sorted_years(years)
        .par_iter()
        .map(|&year| mean_length(store, year, &mask, filter).map(|l| (year, l)))
        .collect::<Result<Vec<_>>>()?;
    Ok(LengthSeries { points: smooth(&raw, window), window, filter_id: filter.id() })
}

/// Change of average length when word `k` moves from frequency `p_k` by
/// `delta_p` and every other word rescales proportionally.
pub fn contribution_exact(p_k: f64, delta_p: f64, l_k: f64, baseline: f64) -> Result<f64> {
    const SLACK: f64 = 1e-9;
    if p_k == 1.0 {
        return Err(Error::DegenerateDistribution);
    }
    if !(0.0..1.0).contains(&p_k) {
        return Err(Error::InvalidArgument(format!("p_k = {p_k} outside [0, 1)")));
    }
    let p_end = p_k + delta_p;
    if !(-SLACK..=1.0 + SLACK).contains(&p_end) {
        return Err(Error::InvalidArgument(format!("p_k + delta_p = {p_end} outside [0, 1]")));
    }
    Ok(delta_p / (1.0 - p_k) * (l_k - baseline))
}

/// First-order contribution `delta_p · (l_k - L)`, accurate when `p_k ≪ 1`.
pub fn contribution_linear(delta_p: f64, l_k: f64, baseline: f64) -> f64 {
    delta_p * (l_k - baseline)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContributionRecord {
    pub token: String,
    pub length: u32,
    pub p_start: f64,
    pub p_end: f64,
    pub delta_p: f64,
    /// Average length at the start of the interval.
    pub baseline_l: f64,
    pub dl_linear: f64,
    /// `None` only when the word is the entire starting distribution.
    pub dl_exact: Option<f64>,
}

impl ContributionRecord {
    /// Average length of every other word at the interval start.
    pub fn mean_excluding(&self) -> Option<f64> {
        (self.p_start < 1.0).then(|| (self.baseline_l - self.p_start * f64::from(self.length)) / (1.0 - self.p_start))
    }
}

/// One endpoint: renormalized frequencies of the selected words, sorted by
/// id, and their mean length.
struct Endpoint {
    entries: Vec<(TokenId, f64)>,
    mean_length: f64,
}

fn endpoint(store: &FrequencyStore, year: i32, window: u32, mask: &[bool], filter: &WordFilter) -> Result<Endpoint> {
    store.slice(year)?;
    if window == 0 {
        let slice = store.slice(year)?;
        let total: u64 = slice.counts().iter().filter(|&&(id, _)| mask[id as usize]).map(|&(_, c)| c).sum();
        let mean_length = mean_length(store, year, mask, filter)?;
        let entries = slice
            .counts()
            .iter()
            .filter(|&&(id, _)| mask[id as usize])
            .map(|&(id, c)| (id, c as f64 / total as f64))
            .collect();
        return Ok(Endpoint { entries, mean_length });
    }
    let (lo, hi) = (year.saturating_sub(window as i32), year.saturating_add(window as i32));
    let mut pooled: BTreeMap<TokenId, f64> = BTreeMap::new();
    let mut used = 0usize;
    for slice in store.slices().iter().filter(|s| (lo..=hi).contains(&s.year())) {
        let total: u64 = slice.counts().iter().filter(|&&(id, _)| mask[id as usize]).map(|&(_, c)| c).sum();
        if total == 0 {
            continue;
        }
        used += 1;
        for &(id, c) in slice.counts().iter().filter(|&&(id, _)| mask[id as usize]) {
            *pooled.entry(id).or_insert(0.0) += c as f64 / total as f64;
        }
    }
    if used == 0 {
        return Err(Error::EmptySelection(format!("no `{filter}` words within {window} years of {year}")));
    }
    let entries: Vec<(TokenId, f64)> = pooled.into_iter().map(|(id, p)| (id, p / used as f64)).collect();
    let mean_length = entries.iter().map(|&(id, p)| p * f64::from(store.word(id).length())).sum();
    Ok(Endpoint { entries, mean_length })
}

/// Per-word contributions to the change of average length between `t1`
/// and `t2`, over the words selected by `filter`. Records cover the union
/// of both years' selected vocabularies and are ordered by token.
pub fn interval_contributions(
    store: &FrequencyStore,
    t1: i32,
    t2: i32,
    filter: &WordFilter,
) -> Result<Vec<ContributionRecord>> {
    interval_contributions_smoothed(store, t1, t2, 0, filter)
}

/// As [`interval_contributions`], with each endpoint distribution averaged
/// over the present years within `window` of it.
pub fn interval_contributions_smoothed(
    store: &FrequencyStore,
    t1: i32,
    t2: i32,
    window: u32,
    filter: &WordFilter,
) -> Result<Vec<ContributionRecord>> {
    if t1 >= t2 {
        return Err(Error::InvalidArgument(format!("interval {t1}..{t2} must have start < end")));
    }
    let mask = filter.mask(store);
    let start = endpoint(store, t1, window, &mask, filter)?;
    let end = endpoint(store, t2, window, &mask, filter)?;
    let baseline = start.mean_length;

    let mut records = Vec::with_capacity(start.entries.len().max(end.entries.len()));
    let (mut i, mut j) = (0, 0);
    while i < start.entries.len() || j < end.entries.len() {
        let a = start.entries.get(i).copied();
        let b = end.entries.get(j).copied();
        let (id, p_start, p_end) = match (a, b) {
            (Some((ia, pa)), Some((ib, pb))) if ia == ib => {
                i += 1;
                j += 1;
                (ia, pa, pb)
            }
            (Some((ia, pa)), Some((ib, _))) if ia < ib => {
                i += 1;
                (ia, pa, 0.0)
            }
            (Some((ia, pa)), None) => {
                i += 1;
                (ia, pa, 0.0)
            }
            (_, Some((ib, pb))) => {
                j += 1;
                (ib, 0.0, pb)
            }
            (None, None) => unreachable!(),
        };
        let word = store.word(id);
        let length = f64::from(word.length());
        let delta_p = p_end - p_start;
        records.push(ContributionRecord {
            token: word.token().to_string(),
            length: word.length(),
            p_start,
            p_end,
            delta_p,
            baseline_l: baseline,
            dl_linear: contribution_linear(delta_p, length, baseline),
            dl_exact: contribution_exact(p_start, delta_p, length, baseline).ok(),
        });
    }
    Ok(records)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LengthBand {
    pub length: u32,
    pub signed_sum: f64,
    /// `|signed_sum|` over the sum of all bands' `|signed_sum|`; `None` when
    /// normalization was not requested.
    pub share: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LengthBandSummary {
    pub bands: Vec<LengthBand>,
}

impl LengthBandSummary {
    pub fn band(&self, length: u32) -> Option<&LengthBand> {
        self.bands.iter().find(|b| b.length == length)
    }

    pub fn total(&self) -> f64 {
        self.bands.iter().map(|b| b.signed_sum).sum()
    }
}

/// Sums linear contributions by word length.
pub fn band_contributions(records: &[ContributionRecord], normalize: bool) -> Result<LengthBandSummary> {
    if records.is_empty() {
        return Err(Error::EmptySelection("no contribution records".into()));
    }
    let mut sums: BTreeMap<u32, f64> = BTreeMap::new();
    for r in records {
        *sums.entry(r.length).or_insert(0.0) += r.dl_linear;
    }
    let scale: f64 = sums.values().map(|s| s.abs()).sum();
    let bands = sums
        .into_iter()
        .map(|(length, signed_sum)| LengthBand {
            length,
            signed_sum,
            share: normalize.then(|| if scale > 0.0 { signed_sum.abs() / scale } else { 0.0 }),
        })
        .collect();
    Ok(LengthBandSummary { bands })
}

/// Ordinary least-squares line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
}

impl LinearFit {
    /// Fits `y = slope·x + intercept`; `None` with fewer than two distinct x.
    pub fn fit(points: &[(f64, f64)]) -> Option<Self> {
        let n = points.len() as f64;
        if points.len() < 2 {
            return None;
        }
        let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
        let my = points.iter().map(|p| p.1).sum::<f64>() / n;
        let (mut sxx, mut sxy) = (0.0, 0.0);
        for &(x, y) in points {
            sxx += (x - mx) * (x - mx);
            sxy += (x - mx) * (y - my);
        }
        if sxx == 0.0 {
            return None;
        }
        let slope = sxy / sxx;
        Some(Self { slope, intercept: my - slope * mx })
    }

    pub fn predict(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VocabSeries {
    pub points: Vec<(i32, u64)>,
    pub threshold: f64,
    pub fit: Option<LinearFit>,
}

/// Number of distinct words per year whose relative frequency is at least
/// `min_rel_freq`, with a least-squares trend.
pub fn vocabulary_series(store: &FrequencyStore, years: &[i32], min_rel_freq: f64) -> Result<VocabSeries> {
    let points = sorted_years(years)
        .par_iter()
        .map(|&year| {
            let slice = store.slice(year)?;
            let total = slice.total() as f64;
            let n = if slice.total() == 0 {
                0
            } else {
                slice.counts().iter().filter(|&&(_, c)| c as f64 / total >= min_rel_freq).count() as u64
            };
            Ok((year, n))
        })
        .collect::<Result<Vec<_>>>()?;
    let xy: Vec<(f64, f64)> = points.iter().map(|&(y, n)| (f64::from(y), n as f64)).collect();
    Ok(VocabSeries { fit: LinearFit::fit(&xy), points, threshold: min_rel_freq })
}

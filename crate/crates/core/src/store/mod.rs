//! Immutable multi-year frequency tables.

mod cache;

use std::collections::HashMap;
use std::fmt;

pub use cache::{decode_cache, encode_cache, load_cache, save_cache, CACHE_MAGIC, CACHE_VERSION};

use crate::error::{Error, Result};
use crate::ingest::{word_length, NormalizationRuleset, TokenFilterConfig};

/// Index into a store's word table. Word ids follow lexicographic token
/// order.
pub type TokenId = u32;

pub const DEFAULT_YEAR_MIN: i32 = 1800;
pub const DEFAULT_YEAR_MAX: i32 = 2008;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WordEntry {
    token: Box<str>,
    length: u32,
}

impl WordEntry {
    pub fn new(token: &str) -> Self {
        Self { token: token.into(), length: word_length(token) }
    }

    pub fn token(&self) -> &str {
        &self.token
    }

    pub fn length(&self) -> u32 {
        self.length
    }
}

/// One year's counts. `total` always equals the sum of `counts`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YearSlice {
    year: i32,
    counts: Vec<(TokenId, u64)>,
    total: u64,
}

impl YearSlice {
    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Non-zero counts, sorted by token id.
    pub fn counts(&self) -> &[(TokenId, u64)] {
        &self.counts
    }

    pub fn count(&self, id: TokenId) -> u64 {
        self.counts.binary_search_by_key(&id, |&(i, _)| i).map_or(0, |at| self.counts[at].1)
    }

    /// Number of distinct words with a non-zero count.
    pub fn vocabulary_size(&self) -> usize {
        self.counts.len()
    }
}

/// Which filter and ruleset produced a store. Stores are only mergeable
/// when their provenance matches.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Provenance {
    filter_id: String,
    ruleset_id: String,
}

impl Provenance {
    pub fn new(filter_id: impl Into<String>, ruleset_id: impl Into<String>) -> Result<Self> {
        let (filter_id, ruleset_id) = (filter_id.into(), ruleset_id.into());
        if filter_id.contains('\n') || ruleset_id.contains('\n') {
            return Err(Error::InvalidArgument("provenance ids may not contain newlines".into()));
        }
        Ok(Self { filter_id, ruleset_id })
    }

    pub fn of(filter: &TokenFilterConfig, rules: &NormalizationRuleset) -> Self {
        Self { filter_id: filter.id(), ruleset_id: rules.id().to_string() }
    }

    pub fn filter_id(&self) -> &str {
        &self.filter_id
    }

    pub fn ruleset_id(&self) -> &str {
        &self.ruleset_id
    }

    pub(crate) fn encode(&self) -> String {
        format!("filter={}\nruleset={}", self.filter_id, self.ruleset_id)
    }

    pub(crate) fn decode(s: &str) -> Option<Self> {
        let (filter, ruleset) = s.split_once('\n')?;
        Some(Self {
            filter_id: filter.strip_prefix("filter=")?.to_string(),
            ruleset_id: ruleset.strip_prefix("ruleset=")?.to_string(),
        })
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "filter={} ruleset={}", self.filter_id, self.ruleset_id)
    }
}

/// Sealed collection of year slices over a shared word table.
///
/// A year is present once any in-range record for it was seen, even if
/// every token was rejected; such a year has total 0. Years never seen are
/// absent, and queries on them fail with [`Error::YearAbsent`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyStore {
    year_min: i32,
    year_max: i32,
    provenance: Provenance,
    words: Vec<WordEntry>,
    slices: Vec<YearSlice>,
}

impl Default for FrequencyStore {
    fn default() -> Self {
        Self::empty(Provenance::default(), DEFAULT_YEAR_MIN, DEFAULT_YEAR_MAX)
    }
}

impl FrequencyStore {
    pub fn empty(provenance: Provenance, year_min: i32, year_max: i32) -> Self {
        Self { year_min, year_max, provenance, words: Vec::new(), slices: Vec::new() }
    }

    pub fn year_min(&self) -> i32 {
        self.year_min
    }

    pub fn year_max(&self) -> i32 {
        self.year_max
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn words(&self) -> &[WordEntry] {
        &self.words
    }

    pub fn word(&self, id: TokenId) -> &WordEntry {
        &self.words[id as usize]
    }

    pub fn lookup(&self, token: &str) -> Option<TokenId> {
        self.words.binary_search_by(|w| w.token().cmp(token)).ok().map(|i| i as TokenId)
    }

    pub fn slices(&self) -> &[YearSlice] {
        &self.slices
    }

    /// Present years, increasing.
    pub fn years(&self) -> impl Iterator<Item = i32> + '_ {
        self.slices.iter().map(|s| s.year)
    }

    pub fn contains_year(&self, year: i32) -> bool {
        self.slice_index(year).is_some()
    }

    pub fn slice(&self, year: i32) -> Result<&YearSlice> {
        self.slice_index(year).map(|i| &self.slices[i]).ok_or(Error::YearAbsent(year))
    }

    fn slice_index(&self, year: i32) -> Option<usize> {
        self.slices.binary_search_by_key(&year, |s| s.year).ok()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    /// Sum of all stored counts over all years.
    pub fn grand_total(&self) -> u128 {
        self.slices.iter().map(|s| u128::from(s.total)).sum()
    }

    pub fn count(&self, token: &str, year: i32) -> Result<u64> {
        let slice = self.slice(year)?;
        Ok(self.lookup(token).map_or(0, |id| slice.count(id)))
    }

    /// Relative frequency of `token` in `year`: its count over the year's
    /// word-token total. Zero for unknown tokens and for empty years.
    pub fn frequency(&self, token: &str, year: i32) -> Result<f64> {
        let slice = self.slice(year)?;
        if slice.total == 0 {
            return Ok(0.0);
        }
        let count = self.lookup(token).map_or(0, |id| slice.count(id));
        Ok(count as f64 / slice.total as f64)
    }

    /// Sums counts of stores that share provenance. The result does not
    /// depend on argument order; an empty input gives an empty default store.
    pub fn merge(stores: impl IntoIterator<Item = FrequencyStore>) -> Result<FrequencyStore> {
        let mut stores = stores.into_iter();
        let Some(first) = stores.next() else {
            return Ok(FrequencyStore::default());
        };
        let rest: Vec<FrequencyStore> = stores.collect();
        if rest.is_empty() {
            return Ok(first);
        }
        for s in &rest {
            if s.provenance != first.provenance {
                return Err(Error::ProvenanceMismatch {
                    expected: first.provenance.to_string(),
                    found: s.provenance.to_string(),
                });
            }
        }
        let year_min = rest.iter().map(|s| s.year_min).fold(first.year_min, i32::min);
        let year_max = rest.iter().map(|s| s.year_max).fold(first.year_max, i32::max);
        let mut builder = StoreBuilder::new(first.provenance.clone(), year_min, year_max)?;
        for store in std::iter::once(&first).chain(rest.iter()) {
            builder.absorb(store);
        }
        Ok(builder.seal())
    }

    pub(crate) fn from_parts(
        year_min: i32,
        year_max: i32,
        provenance: Provenance,
        words: Vec<WordEntry>,
        slices: Vec<YearSlice>,
    ) -> Self {
        Self { year_min, year_max, provenance, words, slices }
    }
}

/// Mutable accumulator that seals into a [`FrequencyStore`].
#[derive(Debug, Clone)]
pub struct StoreBuilder {
    provenance: Provenance,
    year_min: i32,
    year_max: i32,
    interner: HashMap<Box<str>, TokenId>,
    tokens: Vec<Box<str>>,
    // indexed by year - year_min
    years: Vec<Option<HashMap<TokenId, u64>>>,
}

impl StoreBuilder {
    pub fn new(provenance: Provenance, year_min: i32, year_max: i32) -> Result<Self> {
        if year_min > year_max {
            return Err(Error::InvalidArgument(format!("year range {year_min}..={year_max} is empty")));
        }
        let span = (i64::from(year_max) - i64::from(year_min) + 1) as usize;
        Ok(Self {
            provenance,
            year_min,
            year_max,
            interner: HashMap::new(),
            tokens: Vec::new(),
            years: vec![None; span],
        })
    }

    pub fn year_range(&self) -> (i32, i32) {
        (self.year_min, self.year_max)
    }

    pub fn in_range(&self, year: i32) -> bool {
        (self.year_min..=self.year_max).contains(&year)
    }

    fn year_slot(&mut self, year: i32) -> Result<&mut HashMap<TokenId, u64>> {
        if !self.in_range(year) {
            return Err(Error::InvalidArgument(format!("year {year} outside {}..={}", self.year_min, self.year_max)));
        }
        Ok(self.years[(year - self.year_min) as usize].get_or_insert_with(HashMap::new))
    }

    /// Marks `year` present without adding counts.
    pub fn mark_year(&mut self, year: i32) -> Result<()> {
        self.year_slot(year).map(|_| ())
    }

    pub fn intern(&mut self, token: &str) -> TokenId {
        if let Some(&id) = self.interner.get(token) {
            return id;
        }
        let id = self.tokens.len() as TokenId;
        self.tokens.push(token.into());
        self.interner.insert(token.into(), id);
        id
    }

    /// Adds `count` occurrences of an interned token. Counts saturate at
    /// `u64::MAX`.
    pub fn add_id(&mut self, id: TokenId, year: i32, count: u64) -> Result<()> {
        let slot = self.year_slot(year)?.entry(id).or_insert(0);
        *slot = slot.saturating_add(count);
        Ok(())
    }

    pub fn add(&mut self, token: &str, year: i32, count: u64) -> Result<()> {
        self.year_slot(year)?;
        let id = self.intern(token);
        self.add_id(id, year, count)
    }

    fn absorb(&mut self, store: &FrequencyStore) {
        let ids: Vec<TokenId> = store.words.iter().map(|w| self.intern(w.token())).collect();
        for slice in &store.slices {
            let slot = self.year_slot(slice.year).expect("merge range covers inputs");
            for &(id, count) in &slice.counts {
                let c = slot.entry(ids[id as usize]).or_insert(0);
                *c = c.saturating_add(count);
            }
        }
    }

    /// Produces the canonical store: word ids in lexicographic token order,
    /// zero counts dropped, totals recomputed.
    pub fn seal(self) -> FrequencyStore {
        let StoreBuilder { provenance, year_min, year_max, tokens, years, .. } = self;
        let mut order: Vec<TokenId> = (0..tokens.len() as TokenId).collect();
        order.sort_unstable_by(|&a, &b| tokens[a as usize].cmp(&tokens[b as usize]));
        let mut remap = vec![0 as TokenId; tokens.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old as usize] = new as TokenId;
        }
        let words: Vec<WordEntry> = order.iter().map(|&old| WordEntry::new(&tokens[old as usize])).collect();

        let slices = years
            .into_iter()
            .enumerate()
            .filter_map(|(offset, counts)| {
                let counts = counts?;
                let mut counts: Vec<(TokenId, u64)> =
                    counts.into_iter().filter(|&(_, c)| c > 0).map(|(id, c)| (remap[id as usize], c)).collect();
                counts.sort_unstable_by_key(|&(id, _)| id);
                let total = counts.iter().fold(0u64, |acc, &(_, c)| acc.saturating_add(c));
                Some(YearSlice { year: year_min + offset as i32, counts, total })
            })
            .collect();

        // drop words whose every count was zero
        let mut store = FrequencyStore { year_min, year_max, provenance, words, slices };
        store.compact_words();
        store
    }
}

impl FrequencyStore {
    fn compact_words(&mut self) {
        let mut used = vec![false; self.words.len()];
        for slice in &self.slices {
            for &(id, _) in &slice.counts {
                used[id as usize] = true;
            }
        }
        if used.iter().all(|&u| u) {
            return;
        }
        let mut remap = vec![TokenId::MAX; self.words.len()];
        let mut next = 0;
        for (old, &u) in used.iter().enumerate() {
            if u {
                remap[old] = next;
                next += 1;
            }
        }
        let words = std::mem::take(&mut self.words);
        self.words = words.into_iter().zip(&used).filter_map(|(w, &u)| u.then_some(w)).collect();
        for slice in &mut self.slices {
            for entry in &mut slice.counts {
                entry.0 = remap[entry.0 as usize];
            }
        }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn provenance() -> Provenance {
        Provenance::of(&TokenFilterConfig::english(), &NormalizationRuleset::empty())
    }

    /// Builds a store from `(year, token, count)` triples.
    pub fn store(entries: &[(i32, &str, u64)]) -> FrequencyStore {
        let mut b = StoreBuilder::new(provenance(), DEFAULT_YEAR_MIN, DEFAULT_YEAR_MAX).unwrap();
        for &(year, token, count) in entries {
            b.add(token, year, count).unwrap();
        }
        b.seal()
    }

    /// The two-word, two-year fixture: a 0.5 -> 0.25, abcd 0.5 -> 0.75.
    pub fn two_word() -> FrequencyStore {
        store(&[(1900, "a", 2), (1900, "abcd", 2), (1901, "a", 1), (1901, "abcd", 3)])
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn frequency_examples() {
        let s = store(&[(1900, "a", 3), (1900, "bb", 1)]);
        assert_eq!(s.frequency("a", 1900).unwrap(), 0.75);
        assert_eq!(s.frequency("bb", 1900).unwrap(), 0.25);
        assert_eq!(s.frequency("zz", 1900).unwrap(), 0.0);
        assert!(matches!(s.frequency("a", 1750), Err(Error::YearAbsent(1750))));
        assert!(matches!(s.frequency("a", 1901), Err(Error::YearAbsent(1901))));
    }

    #[test]
    fn words_are_sorted_with_lengths() {
        let s = store(&[(1900, "мир", 1), (1900, "don't", 1), (1900, "a", 1)]);
        let toks: Vec<(&str, u32)> = s.words().iter().map(|w| (w.token(), w.length())).collect();
        assert_eq!(toks, vec![("a", 1), ("don't", 5), ("мир", 3)]);
        assert_eq!(s.lookup("мир"), Some(2));
        assert_eq!(s.lookup("b"), None);
    }

    #[test]
    fn zero_count_years_stay_present() {
        let mut b = StoreBuilder::new(provenance(), 1800, 2008).unwrap();
        b.mark_year(1900).unwrap();
        b.add("the", 1901, 0).unwrap();
        let s = b.seal();
        assert_eq!(s.years().collect::<Vec<_>>(), vec![1900, 1901]);
        assert_eq!(s.slice(1900).unwrap().total(), 0);
        assert_eq!(s.frequency("the", 1901).unwrap(), 0.0);
        assert!(s.words().is_empty());
        assert!(s.contains_year(1900) && !s.contains_year(1902));
    }

    #[test]
    fn merge_examples() {
        let a = store(&[(1900, "a", 2)]);
        let b = store(&[(1900, "a", 1), (1900, "b", 1)]);
        let m = FrequencyStore::merge([a.clone(), b.clone()]).unwrap();
        assert_eq!(m.count("a", 1900).unwrap(), 3);
        assert_eq!(m.count("b", 1900).unwrap(), 1);
        assert_eq!(m.slice(1900).unwrap().total(), 4);
        assert_eq!(m, FrequencyStore::merge([b, a.clone()]).unwrap());
        assert_eq!(FrequencyStore::merge([a.clone()]).unwrap(), a);
        let empty = FrequencyStore::merge([]).unwrap();
        assert!(empty.is_empty() && empty.words().is_empty());
    }

    #[test]
    fn merge_checks_provenance() {
        let a = store(&[(1900, "a", 2)]);
        let mut b = StoreBuilder::new(
            Provenance::of(&TokenFilterConfig::russian(), &NormalizationRuleset::r1918()),
            1800,
            2008,
        )
        .unwrap();
        b.add("мир", 1900, 1).unwrap();
        assert!(matches!(FrequencyStore::merge([a, b.seal()]), Err(Error::ProvenanceMismatch { .. })));
    }

    #[test]
    fn merge_widens_year_range() {
        let mut a = StoreBuilder::new(provenance(), 1800, 1900).unwrap();
        a.add("a", 1850, 1).unwrap();
        let mut b = StoreBuilder::new(provenance(), 1900, 2000).unwrap();
        b.add("a", 1950, 1).unwrap();
        let m = FrequencyStore::merge([a.seal(), b.seal()]).unwrap();
        assert_eq!((m.year_min(), m.year_max()), (1800, 2000));
        assert_eq!(m.years().collect::<Vec<_>>(), vec![1850, 1950]);
    }

    #[test]
    fn conservation_and_normalization() {
        let s = two_word();
        for slice in s.slices() {
            let sum: u64 = slice.counts().iter().map(|&(_, c)| c).sum();
            assert_eq!(sum, slice.total());
            let p: f64 = s.words().iter().map(|w| s.frequency(w.token(), slice.year()).unwrap()).sum();
            assert!((p - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn out_of_range_adds_are_rejected() {
        let mut b = StoreBuilder::new(provenance(), 1800, 1900).unwrap();
        assert!(b.add("a", 1950, 1).is_err());
        assert!(StoreBuilder::new(provenance(), 1900, 1800).is_err());
    }

    #[test]
    fn provenance_text_form() {
        let p = provenance();
        assert_eq!(Provenance::decode(&p.encode()), Some(p));
        assert!(Provenance::new("a\nb", "x").is_err());
    }
}

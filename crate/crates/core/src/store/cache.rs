//! Binary cache format.
//!
//! Little-endian throughout:
//!
//! ```text
//! magic            "LXDN"
//! format_version   u32
//! year_min         i32
//! year_max         i32
//! token_count      u64
//! provenance       u32 byte length + UTF-8 ("filter=..\nruleset=..")
//! year_count       varint
//! years            varint deltas; first relative to year_min
//! token table      token_count x (varint byte length + UTF-8), sorted
//! postings         per token: varint n, then n x (varint year delta, varint count);
//!                  first delta relative to year_min
//! crc32            u32, IEEE CRC-32 of every preceding byte
//! ```
//!
//! Varints are unsigned LEB128. Year totals are not stored; they are the
//! sums of the postings.

use std::path::Path;

use super::{FrequencyStore, Provenance, TokenId, WordEntry, YearSlice};
use crate::error::{Error, Result};

pub const CACHE_MAGIC: &[u8; 4] = b"LXDN";
pub const CACHE_VERSION: u32 = 1;

const HEADER_LEN: usize = 4 + 4 + 4 + 4 + 8;

fn put_varint(out: &mut Vec<u8>, mut v: u64) {
    while v >= 0x80 {
        out.push((v as u8) | 0x80);
        v >>= 7;
    }
    out.push(v as u8);
}

pub fn encode_cache(store: &FrequencyStore) -> Vec<u8> {
    let mut out = Vec::with_capacity(64 + store.words.len() * 16);
    out.extend_from_slice(CACHE_MAGIC);
    out.extend_from_slice(&CACHE_VERSION.to_le_bytes());
    out.extend_from_slice(&store.year_min.to_le_bytes());
    out.extend_from_slice(&store.year_max.to_le_bytes());
    out.extend_from_slice(&(store.words.len() as u64).to_le_bytes());
    let provenance = store.provenance.encode();
    out.extend_from_slice(&(provenance.len() as u32).to_le_bytes());
    out.extend_from_slice(provenance.as_bytes());

    put_varint(&mut out, store.slices.len() as u64);
    let mut prev = store.year_min;
    for slice in &store.slices {
        put_varint(&mut out, (i64::from(slice.year) - i64::from(prev)) as u64);
        prev = slice.year;
    }

    for word in &store.words {
        put_varint(&mut out, word.token().len() as u64);
        out.extend_from_slice(word.token().as_bytes());
    }

    // transpose year-major slices into token-major postings
    let mut postings: Vec<Vec<(i32, u64)>> = vec![Vec::new(); store.words.len()];
    for slice in &store.slices {
        for &(id, count) in &slice.counts {
            postings[id as usize].push((slice.year, count));
        }
    }
    for list in &postings {
        put_varint(&mut out, list.len() as u64);
        let mut prev = store.year_min;
        for &(year, count) in list {
            put_varint(&mut out, (i64::from(year) - i64::from(prev)) as u64);
            put_varint(&mut out, count);
            prev = year;
        }
    }

    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    out
}

pub fn save_cache(store: &FrequencyStore, path: &Path) -> Result<()> {
    std::fs::write(path, encode_cache(store))?;
    Ok(())
}

pub fn load_cache(path: &Path) -> Result<FrequencyStore> {
    decode_cache(&std::fs::read(path)?)
}

fn corrupt(what: impl Into<String>) -> Error {
    Error::CorruptCache(what.into())
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn bytes(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len()).ok_or_else(|| corrupt("truncated"))?;
        let b = &self.buf[self.pos..end];
        self.pos = end;
        Ok(b)
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        Ok(self.bytes(N)?.try_into().expect("length checked"))
    }

    fn varint(&mut self) -> Result<u64> {
        let mut v = 0u64;
        for shift in (0..64).step_by(7) {
            let byte = self.bytes(1)?[0];
            let bits = u64::from(byte & 0x7f);
            if shift == 63 && bits > 1 {
                return Err(corrupt("varint overflow"));
            }
            v |= bits << shift;
            if byte & 0x80 == 0 {
                return Ok(v);
            }
        }
        Err(corrupt("varint overflow"))
    }

    fn len(&mut self) -> Result<usize> {
        let n = self.varint()?;
        usize::try_from(n)
            .ok()
            .filter(|&n| n <= self.buf.len() - self.pos)
            .ok_or_else(|| corrupt("length exceeds file size"))
    }

    fn year_after(&mut self, prev: i32, year_max: i32) -> Result<i32> {
        let delta = self.varint()?;
        i32::try_from(i64::from(prev) + i64::try_from(delta).unwrap_or(i64::MAX))
            .ok()
            .filter(|&y| y <= year_max)
            .ok_or_else(|| corrupt("year out of range"))
    }
}

pub fn decode_cache(buf: &[u8]) -> Result<FrequencyStore> {
    let mut r = Reader { buf, pos: 0 };
    if r.bytes(4)? != CACHE_MAGIC {
        return Err(corrupt("bad magic"));
    }
    let version = u32::from_le_bytes(r.array()?);
    if version != CACHE_VERSION {
        return Err(Error::CacheVersionMismatch { found: version, expected: CACHE_VERSION });
    }
    if buf.len() < HEADER_LEN + 4 + 4 {
        return Err(corrupt("truncated"));
    }
    let (payload, crc) = buf.split_at(buf.len() - 4);
    if crc32fast::hash(payload) != u32::from_le_bytes(crc.try_into().expect("4 bytes")) {
        return Err(corrupt("checksum mismatch"));
    }
    let mut r = Reader { buf: payload, pos: r.pos };

    let year_min = i32::from_le_bytes(r.array()?);
    let year_max = i32::from_le_bytes(r.array()?);
    if year_min > year_max {
        return Err(corrupt("inverted year range"));
    }
    let token_count = u64::from_le_bytes(r.array()?);
    let prov_len = u32::from_le_bytes(r.array()?) as usize;
    let provenance = std::str::from_utf8(r.bytes(prov_len)?)
        .ok()
        .and_then(Provenance::decode)
        .ok_or_else(|| corrupt("bad provenance"))?;

    let year_count = r.len()?;
    let mut years = Vec::with_capacity(year_count);
    let mut prev = year_min;
    for i in 0..year_count {
        let year = r.year_after(prev, year_max)?;
        if i > 0 && year == prev {
            return Err(corrupt("duplicate year"));
        }
        years.push(year);
        prev = year;
    }

    let token_count = usize::try_from(token_count)
        .ok()
        .filter(|&n| n <= payload.len())
        .ok_or_else(|| corrupt("token count exceeds file size"))?;
    if token_count > TokenId::MAX as usize {
        return Err(corrupt("too many tokens"));
    }
    let mut words: Vec<WordEntry> = Vec::with_capacity(token_count);
    for _ in 0..token_count {
        let n = r.len()?;
        let token = std::str::from_utf8(r.bytes(n)?).map_err(|_| corrupt("token is not UTF-8"))?;
        if token.is_empty() {
            return Err(corrupt("empty token"));
        }
        if words.last().is_some_and(|w| w.token() >= token) {
            return Err(corrupt("token table not strictly sorted"));
        }
        words.push(WordEntry::new(token));
    }

    let mut per_year: Vec<Vec<(TokenId, u64)>> = vec![Vec::new(); years.len()];
    for id in 0..token_count {
        let n = r.len()?;
        if n == 0 {
            return Err(corrupt("token without postings"));
        }
        let mut prev = year_min;
        for i in 0..n {
            let year = r.year_after(prev, year_max)?;
            if i > 0 && year == prev {
                return Err(corrupt("duplicate posting year"));
            }
            let count = r.varint()?;
            if count == 0 {
                return Err(corrupt("zero count posting"));
            }
            let slot = years.binary_search(&year).map_err(|_| corrupt("posting for absent year"))?;
            per_year[slot].push((id as TokenId, count));
            prev = year;
        }
    }
    if r.pos != payload.len() {
        return Err(corrupt("trailing bytes"));
    }

    let mut slices = Vec::with_capacity(years.len());
    for (year, counts) in years.into_iter().zip(per_year) {
        let total = counts
            .iter()
            .try_fold(0u64, |acc, &(_, c)| acc.checked_add(c))
            .ok_or_else(|| corrupt("year total overflows"))?;
        slices.push(YearSlice { year, counts, total });
    }
    Ok(FrequencyStore::from_parts(year_min, year_max, provenance, words, slices))
}

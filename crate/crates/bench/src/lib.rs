//! Synthetic inputs shared by the benchmarks.

use lexidyn_core::{ingest_stream, FrequencyStore, NormalizationRuleset, TokenFilterConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};

/// `n` four-column 1-gram lines over a Zipf-distributed vocabulary of
/// `vocab` lowercase words, years 1800-2008.
pub fn synthetic_lines(n: usize, vocab: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words: Vec<String> = (0..vocab)
        .map(|_| {
            let len = rng.gen_range(1..=12);
            (0..len).map(|_| rng.gen_range(b'a'..=b'z') as char).collect()
        })
        .collect();
    let zipf = Zipf::new(vocab as u64, 1.07).expect("valid Zipf parameters");
    (0..n)
        .map(|_| {
            let word = &words[zipf.sample(&mut rng) as usize - 1];
            let year = rng.gen_range(1800..=2008);
            let count = rng.gen_range(1..1_000_000u64);
            format!("{word}\t{year}\t{count}\t{}", count / 7 + 1)
        })
        .collect()
}

pub fn synthetic_store(n: usize, vocab: usize, seed: u64) -> FrequencyStore {
    let lines = synthetic_lines(n, vocab, seed);
    ingest_stream(&lines, &TokenFilterConfig::english(), &NormalizationRuleset::empty(), (1800, 2008))
        .expect("valid year range")
        .store
}

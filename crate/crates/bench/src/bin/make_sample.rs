//! Writes the bundled synthetic 1-gram sample.
//!
//! Usage: make_sample [BASE_TSV] [OUT_GZ] [SEED]
//!
//! Word shapes and base frequencies come from `data/en_base_freq.tsv`; the
//! yearly dynamics are generated: totals grow from 1e7 to 1e10 tokens a
//! year, longer words gain share from 1880 to 1994 and lose part of it
//! afterwards, personal pronouns shift after 1950, and later-ranked words
//! enter at random years. Output is sorted by token, then year, in the
//! four-column Google Books layout, with some non-word and malformed lines.

use std::f64::consts::TAU;
use std::io::Write;

use anyhow::Context;
use flate2::write::GzEncoder;
use flate2::Compression;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

const FIRST: i32 = 1800;
const LAST: i32 = 2008;

struct Word {
    token: String,
    base: f64,
    length: f64,
    entry: i32,
    pronoun: f64,
    phase: [f64; 2],
    amp: f64,
}

/// Share of the length drift reached in `year`.
fn drift(year: i32) -> f64 {
    let y = f64::from(year);
    if y < 1880.0 {
        0.0
    } else if y <= 1994.0 {
        (y - 1880.0) / (1994.0 - 1880.0)
    } else {
        1.0 - 0.5 * (y - 1994.0) / (2008.0 - 1994.0)
    }
}

fn weight(w: &Word, year: i32) -> f64 {
    if year < w.entry {
        return 0.0;
    }
    let t = f64::from(year - FIRST) / f64::from(LAST - FIRST);
    let ramp = (f64::from(year - w.entry + 1) / 20.0).min(1.0);
    let late = (f64::from(year) - 1950.0).max(0.0) / 58.0;
    let walk = w.amp * ((TAU * t * 1.5 + w.phase[0]).sin() + 0.5 * (TAU * t * 4.0 + w.phase[1]).sin());
    w.base * ramp * (0.12 * (w.length - 4.3) * drift(year) + w.pronoun * late + walk).exp()
}

fn total_tokens(year: i32) -> f64 {
    let t = f64::from(year - FIRST) / f64::from(LAST - FIRST);
    1e7 * 10f64.powf(3.0 * t)
}

fn main() -> anyhow::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let base_path = args.get(1).map_or("data/en_base_freq.tsv", String::as_str);
    let out_path = args.get(2).map_or("data/sample/eng-1gram-sample.tsv.gz", String::as_str);
    let seed: u64 = args.get(3).map_or(Ok(1918), |s| s.parse())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let text = std::fs::read_to_string(base_path).with_context(|| format!("reading {base_path}"))?;
    let mut words = Vec::new();
    for (rank, line) in text.lines().filter(|l| !l.starts_with('#')).enumerate() {
        let (token, freq) = line.split_once('\t').context("base list line without a tab")?;
        let token = if token == "i" { "I".to_string() } else { token.to_string() };
        let pronoun = match token.as_str() {
            "he" | "him" | "his" | "himself" => -0.5,
            "I" | "me" | "my" | "you" | "your" | "we" | "our" => 0.4,
            "she" | "her" => 0.2,
            _ => 0.0,
        };
        let entry = if rank >= 1500 && rng.gen_bool(0.35) { rng.gen_range(FIRST + 1..1990) } else { FIRST };
        words.push(Word {
            length: token.chars().filter(|&c| c != '\'').count() as f64,
            base: freq.trim().parse().with_context(|| format!("frequency of {token}"))?,
            entry,
            pronoun,
            phase: [rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU)],
            amp: rng.gen_range(0.0..0.15),
            token,
        });
    }

    let noise: Vec<(&str, f64)> = vec![
        ("1", 2e-3),
        ("1850", 1e-5),
        ("1900", 2e-5),
        ("19th", 1e-5),
        ("Mr.", 3e-4),
        ("U.S.", 1e-4),
        ("_NOUN_", 5e-2),
        ("the_DET", 1e-2),
        ("--", 5e-4),
        ("&", 3e-4),
    ];
    let years: Vec<i32> = (FIRST..=LAST).collect();
    let sums: Vec<f64> = years.iter().map(|&y| words.iter().map(|w| weight(w, y)).sum()).collect();

    let mut records: Vec<(String, i32, f64)> = Vec::new();
    for (i, &year) in years.iter().enumerate() {
        let total = total_tokens(year);
        for w in &words {
            let p = weight(w, year) / sums[i];
            if p > 0.0 {
                records.push((w.token.clone(), year, p * total));
            }
        }
        for &(token, p) in &noise {
            records.push((token.to_string(), year, p * total));
        }
    }
    records.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));

    let jitter: Normal<f64> = Normal::new(0.0, 0.03)?;
    if let Some(dir) = std::path::Path::new(out_path).parent() {
        std::fs::create_dir_all(dir)?;
    }
    let file = std::fs::File::create(out_path).with_context(|| format!("creating {out_path}"))?;
    let mut out = std::io::BufWriter::new(GzEncoder::new(file, Compression::best()));
    let mut lines = 0u64;
    for (token, year, expected) in records {
        let x = expected * jitter.sample(&mut rng).exp();
        let count = x.floor() as u64 + u64::from(rng.gen_bool(x.fract()));
        if count == 0 {
            continue;
        }
        let volumes = (count / rng.gen_range(2..40)).clamp(1, 500_000);
        writeln!(out, "{token}\t{year}\t{count}\t{volumes}")?;
        lines += 1;
    }
    for bad in ["bad line with no tabs", "abbey\t18x0\t5\t1", "abbey\t1900\t-3\t1", "abbey\t1900"] {
        writeln!(out, "{bad}")?;
        lines += 1;
    }
    out.into_inner().map_err(|e| e.into_error())?.finish()?;
    eprintln!("wrote {lines} lines to {out_path}");
    Ok(())
}

//! Command-line contract tests.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use lexidyn_cli::run;
use tempfile::TempDir;

fn cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("lexidyn").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// A small corpus with a shrinking function word, growing long words and
/// some noise, built into a cache.
fn corpus() -> (TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.tsv");
    let mut text = String::new();
    for year in 1900..=1910 {
        let t = (year - 1900) as u64;
        for (token, count) in [
            ("the", 500 - 20 * t),
            ("of", 300),
            ("he", 120 - 5 * t),
            ("I", 40 + 6 * t),
            ("government", 30 + 9 * t),
            ("development", 5 + 4 * t),
            ("cat", 50),
            ("don't", 10),
        ] {
            text.push_str(&format!("{token}\t{year}\t{count}\t1\n"));
        }
        text.push_str(&format!("1850\t{year}\t99\t1\nburnt_NOUN\t{year}\t7\t1\n"));
    }
    text.push_str("bad line with no tabs\n");
    std::fs::write(&input, text).unwrap();
    let cache = dir.path().join("c.lxdn");
    let (code, out, err) = cli(&["build", "-i", input.to_str().unwrap(), "-o", cache.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("malformed     1"), "{out}");
    (dir, cache)
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn help_lists_every_flag_with_default() {
    for sub in ["", "build", "series", "vocab", "contrib", "topk", "bands", "words", "presence"] {
        let args: Vec<&str> = if sub.is_empty() { vec!["--help"] } else { vec![sub, "--help"] };
        let (code, out, _) = cli(&args);
        assert_eq!(code, 0);
        for line in out.lines().filter(|l| l.trim_start().starts_with('-')) {
            let exempt = ["--help", "--version", "--tokens"].iter().any(|f| line.contains(f));
            assert!(exempt || line.contains("[default:"), "{sub}: {line}");
        }
    }
}

#[test]
fn exit_codes() {
    let (_dir, cache) = corpus();
    let c = cache.to_str().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.tsv");
    std::fs::write(&empty, "").unwrap();
    let out = dir.path().join("e.lxdn");
    assert_eq!(cli(&["build", "-i", empty.to_str().unwrap(), "-o", out.to_str().unwrap()]).0, 2);
    assert!(!out.exists());
    assert_eq!(cli(&["build", "-i", "/nonexistent/x.gz", "-o", out.to_str().unwrap()]).0, 1);
    assert_eq!(cli(&["series", "-c", "/nonexistent/c.lxdn"]).0, 1);
    let (code, _, err) = cli(&["series", "-c", c, "--years", "1700:1750"]);
    assert_eq!(code, 3);
    assert!(err.contains("1700"), "{err}");
    let (code, _, err) = cli(&["contrib", "-c", c, "--period", "1890:1905"]);
    assert_eq!(code, 3);
    assert!(err.contains("1890"), "{err}");
    assert_eq!(cli(&["series", "-c", c, "--bogus"]).0, 4);
    assert_eq!(cli(&["topk", "-c", c, "--sign", "sideways"]).0, 4);
    assert_eq!(cli(&["topk", "-c", c, "--period", "1905:1900"]).0, 4);
    assert_eq!(cli(&["series", "-c", c, "--filter", "custom:colors"]).0, 4);
    assert_eq!(cli(&["series", "-c", c, "--filter", "short", "--cutoff", "0"]).0, 4);
    assert_eq!(cli(&["build", "--ruleset", "nope", "-o", out.to_str().unwrap()]).0, 4);
    assert_eq!(cli(&["presence", "-c", c, "--breakpoints", "1900"]).0, 4);
    assert_eq!(cli(&[]).0, 4);
}

#[test]
fn command_columns() {
    let (_dir, cache) = corpus();
    let c = cache.to_str().unwrap();
    let header = |args: &[&str]| {
        let mut full = args.to_vec();
        full.extend(["-c", c]);
        let (code, out, err) = cli(&full);
        assert_eq!(code, 0, "{args:?}: {err}");
        out.lines().next().unwrap().to_string()
    };
    assert_eq!(header(&["series"]), "year,avg_length");
    assert_eq!(header(&["vocab"]), "year,count,fitted");
    assert_eq!(
        header(&["contrib", "--period", "1900:1910"]),
        "token,length,class,p_start,p_end,delta_p,baseline_l,dl_linear,dl_exact"
    );
    assert_eq!(
        header(&["topk", "--period", "1900:1910", "--sign", "increase", "--class", "content"]),
        "rank,token,dl_linear,dl_exact"
    );
    assert_eq!(header(&["bands", "--period", "1900:1910"]), "length,signed_sum,share");
    assert_eq!(header(&["words", "-t", "he,it,I,his", "--smooth", "5"]), "token,year,freq");
    assert_eq!(header(&["presence", "--breakpoints", "1900,1905,1910"]), "token,1900-1905,1905-1910");
}

#[test]
fn series_and_word_values() {
    let (_dir, cache) = corpus();
    let c = cache.to_str().unwrap();
    let (_, out, _) = cli(&["series", "-c", c, "--years", "1900:1900"]);
    // (500*3 + 300*2 + 120*2 + 40 + 30*10 + 5*11 + 50*3 + 10*5) / 1055; the apostrophe counts.
    assert_eq!(out, format!("year,avg_length\n1900,{}\n", lexidyn_cli::output::fmt_num(2935.0 / 1055.0)));
    let (_, out, _) = cli(&["words", "-c", c, "-t", "of,nothing", "--years", "1900:1901"]);
    let (f0, f1) = (lexidyn_cli::output::fmt_num(300.0 / 1055.0), lexidyn_cli::output::fmt_num(300.0 / 1049.0));
    assert_eq!(out, format!("token,year,freq\nof,1900,{f0}\nof,1901,{f1}\nnothing,1900,0\nnothing,1901,0\n"));
    // Smoothing uses years outside the printed range.
    let (_, smooth, _) = cli(&["words", "-c", c, "-t", "he", "--years", "1905:1905", "--smooth", "5"]);
    let (_, all, _) = cli(&["words", "-c", c, "-t", "he", "--smooth", "5"]);
    let row = smooth.lines().nth(1).unwrap();
    assert!(all.lines().any(|l| l == row), "{row}");
}

#[test]
fn csv_numbers_round_trip() {
    let (_dir, cache) = corpus();
    let (_, out, _) = cli(&["contrib", "-c", cache.to_str().unwrap(), "--period", "1900:1910"]);
    let (_, rows) = parse_csv(&out);
    assert!(!rows.is_empty());
    let mut sum = 0.0;
    for r in &rows {
        let f = |i: usize| r[i].parse::<f64>().unwrap();
        let (length, p0, p1, dp, base, lin, exact) = (f(1), f(3), f(4), f(5), f(6), f(7), f(8));
        assert!((dp - (p1 - p0)).abs() <= 1e-12, "{r:?}");
        assert!((lin - dp * (length - base)).abs() <= 1e-12, "{r:?}");
        assert!((exact - lin / (1.0 - p0)).abs() <= 1e-12, "{r:?}");
        sum += lin;
    }
    let (_, series, _) = cli(&["series", "-c", cache.to_str().unwrap(), "--years", "1900:1910"]);
    let (_, s) = parse_csv(&series);
    let delta = s[10][1].parse::<f64>().unwrap() - s[0][1].parse::<f64>().unwrap();
    assert!((sum - delta).abs() <= 1e-10, "{sum} vs {delta}");
}

#[test]
fn classes_and_bands() {
    let (_dir, cache) = corpus();
    let c = cache.to_str().unwrap();
    let (_, out, _) = cli(&["contrib", "-c", c, "--period", "1900:1910"]);
    let (_, rows) = parse_csv(&out);
    let class = |t: &str| rows.iter().find(|r| r[0] == t).unwrap()[2].clone();
    assert_eq!(class("the"), "function");
    assert_eq!(class("he"), "pronoun-personal");
    assert_eq!(class("government"), "content");
    // Top function words (pronouns included), ranked by |dl_linear| from the contrib rows.
    let mut expected: Vec<(f64, String)> = rows
        .iter()
        .filter(|r| r[2] == "function" || r[2] == "pronoun-personal")
        .map(|r| (r[7].parse::<f64>().unwrap(), r[0].clone()))
        .collect();
    expected.sort_by(|a, b| b.0.abs().total_cmp(&a.0.abs()).then(a.1.cmp(&b.1)));
    let (_, out, _) = cli(&["topk", "-c", c, "--period", "1900:1910", "--class", "function", "-k", "3"]);
    let (_, top) = parse_csv(&out);
    let got: Vec<(String, String)> = top.iter().map(|r| (r[1].clone(), r[2].clone())).collect();
    let want: Vec<(String, String)> =
        expected.iter().take(3).map(|(v, t)| (t.clone(), lexidyn_cli::output::fmt_num(*v))).collect();
    assert_eq!(got, want);

    let dir = tempfile::tempdir().unwrap();
    let list = dir.path().join("animals.txt");
    std::fs::write(&list, "# pets\ncat\n").unwrap();
    let spec = format!("animals={}", list.display());
    let (code, out, err) =
        cli(&["series", "-c", c, "--filter", "custom:animals", "--class-list", &spec, "--years", "1900:1901"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out, "year,avg_length\n1900,3\n1901,3\n");

    let (_, out, _) = cli(&["bands", "-c", c, "--period", "1900:1910"]);
    let (_, rows) = parse_csv(&out);
    let share: f64 = rows.iter().map(|r| r[2].parse::<f64>().unwrap().abs()).sum();
    assert!((share - 1.0).abs() < 1e-12);
    let (_, raw, _) = cli(&["bands", "-c", c, "--period", "1900:1910", "--raw"]);
    assert!(parse_csv(&raw).1.iter().all(|r| r[2].is_empty()));
}

#[test]
fn config_file_and_precedence() {
    let (dir, cache) = corpus();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        format!(
            "# shared settings\ncache = {}\nk=2\nsign=increase\nperiod=1900:1910\nthreshold=1e-3\nraw=true\n",
            cache.display()
        ),
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let (code, out, err) = cli(&["topk", "--config", cfg]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.lines().count(), 3);
    let (_, out, _) = cli(&["--config", cfg, "topk", "-k", "3", "--sign", "decrease"]);
    let (_, rows) = parse_csv(&out);
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[2].starts_with('-')));
    let (_, out, _) = cli(&["bands", "--config", cfg]);
    assert!(parse_csv(&out).1.iter().all(|r| r[2].is_empty()));

    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "colour=blue\n").unwrap();
    assert_eq!(cli(&["series", "--config", bad.to_str().unwrap()]).0, 4);
    std::fs::write(&bad, "no equals sign\n").unwrap();
    assert_eq!(cli(&["series", "--config", bad.to_str().unwrap()]).0, 4);
    assert_eq!(cli(&["series", "--config", "/nonexistent.cfg"]).0, 1);
}

#[test]
fn output_file() {
    let (dir, cache) = corpus();
    let out = dir.path().join("series.csv");
    let (code, stdout, _) = cli(&["series", "-c", cache.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let (_, direct, _) = cli(&["series", "-c", cache.to_str().unwrap()]);
    assert_eq!(std::fs::read_to_string(out).unwrap(), direct);
}

#[test]
fn vocab_reports_slope() {
    let (_dir, cache) = corpus();
    let (code, out, err) = cli(&["vocab", "-c", cache.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(err.starts_with("slope 0 words/year"), "{err}");
    assert!(out.lines().skip(1).all(|l| l.split(',').nth(1) == Some("8")), "{out}");
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lexidyn"))
}

fn build_from_stdin(input: &str, extra: &[&str], cache: &Path) -> std::process::Output {
    let mut child = binary()
        .args(["build", "-i", "-", "-o", cache.to_str().unwrap()])
        .args(extra)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

#[test]
fn stdin_russian_build_and_env_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("ru.lxdn");
    let out = build_from_stdin(
        "миръ\t1900\t5\t1\nхлѣбъ\t1900\t3\t1\r\nмир\t1901\t4\t1\nон\t1901\t1\t1\n",
        &["--lang", "ru", "--ruleset", "r1918"],
        &cache,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = binary().args(["words", "-t", "хлѣбъ,мир"]).env("LEXIDYN_CACHE", &cache).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "token,year,freq\nхлеб,1900,0.375\nхлеб,1901,0\nмир,1900,0.625\nмир,1901,0.8\n"
    );
    let out = binary().args(["contrib", "--period", "1900:1901"]).env("LEXIDYN_CACHE", &cache).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\nон,2,pronoun-personal,"), "{text}");

    let empty = build_from_stdin("", &[], &dir.path().join("e.lxdn"));
    assert_eq!(empty.status.code(), Some(2));
    let help = binary().arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}

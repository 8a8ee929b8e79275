//! Line grammars for Google Books 1-gram exports and totals files.

use crate::error::MalformedLine;

/// One line of a 1-gram export. The token is neither filtered nor
/// normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawNgramRecord<'a> {
    pub token: &'a str,
    pub year: i32,
    pub match_count: u64,
    pub volume_count: u64,
}

/// Parses `token TAB year TAB match_count TAB volume_count`. The three
/// column form `token TAB year TAB count` is also accepted, with a volume
/// count of zero. A trailing `\r` is ignored.
pub fn parse_ngram_line(line: &str) -> Result<RawNgramRecord<'_>, MalformedLine> {
    let line = line.strip_suffix('\n').unwrap_or(line);
    let line = line.strip_suffix('\r').unwrap_or(line);
    let mut fields = line.split('\t');
    let mut next = || fields.next();
    let (token, year, matches, volumes, extra) = (next(), next(), next(), next(), next());
    let (token, year, matches) = match (token, year, matches, extra) {
        (Some(t), Some(y), Some(m), None) => (t, y, m),
        _ => {
            return Err(MalformedLine::FieldCount(line.split('\t').count()));
        }
    };
    if token.is_empty() {
        return Err(MalformedLine::EmptyToken);
    }
    let year = year.parse::<i32>().map_err(|_| MalformedLine::BadYear)?;
    let match_count = parse_count(matches).ok_or(MalformedLine::BadMatchCount)?;
    let volume_count = match volumes {
        Some(v) => parse_count(v).ok_or(MalformedLine::BadVolumeCount)?,
        None => 0,
    };
    Ok(RawNgramRecord { token, year, match_count, volume_count })
}

/// As [`parse_ngram_line`], validating UTF-8 first.
pub fn parse_ngram_bytes(line: &[u8]) -> Result<RawNgramRecord<'_>, MalformedLine> {
    let line = std::str::from_utf8(line).map_err(|_| MalformedLine::InvalidUtf8)?;
    parse_ngram_line(line)
}

// Digits only: `u64::from_str` would also take a leading '+'.
fn parse_count(field: &str) -> Option<u64> {
    if field.is_empty() || !field.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    field.parse().ok()
}

/// Parses one line of a totals file: tab-separated entries of
/// `year,match_count,page_count,volume_count`. Returns `(year, match_count)`.
pub fn parse_totals_line(line: &str) -> Result<Vec<(i32, u64)>, MalformedLine> {
    let line = line.trim_end_matches(['\n', '\r']);
    line.split('\t')
        .filter(|entry| !entry.trim().is_empty())
        .map(|entry| {
            let mut parts = entry.trim().split(',');
            let year = parts.next().and_then(|y| y.parse::<i32>().ok());
            let matches = parts.next().and_then(parse_count);
            let pages = parts.next().and_then(parse_count);
            let volumes = parts.next().and_then(parse_count);
            match (year, matches, pages, volumes, parts.next()) {
                (Some(year), Some(matches), Some(_), Some(_), None) => Ok((year, matches)),
                _ => Err(MalformedLine::BadTotalsEntry),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_column_lines() {
        assert_eq!(
            parse_ngram_line("analysis\t1905\t54\t12"),
            Ok(RawNgramRecord { token: "analysis", year: 1905, match_count: 54, volume_count: 12 })
        );
        assert_eq!(
            parse_ngram_line("the\t2000\t0\t0"),
            Ok(RawNgramRecord { token: "the", year: 2000, match_count: 0, volume_count: 0 })
        );
    }

    #[test]
    fn three_column_and_crlf() {
        assert_eq!(
            parse_ngram_line("мир\t1900\t7\r\n"),
            Ok(RawNgramRecord { token: "мир", year: 1900, match_count: 7, volume_count: 0 })
        );
    }

    #[test]
    fn dirty_volume_counts_are_tolerated() {
        // volume_count > match_count is not our problem
        let rec = parse_ngram_line("a\t1900\t1\t9").unwrap();
        assert_eq!((rec.match_count, rec.volume_count), (1, 9));
    }

    #[test]
    fn malformed_lines() {
        assert_eq!(parse_ngram_line("bad line with no tabs"), Err(MalformedLine::FieldCount(1)));
        assert_eq!(parse_ngram_line("a\t1\t2\t3\t4"), Err(MalformedLine::FieldCount(5)));
        assert_eq!(parse_ngram_line("\t1900\t1\t1"), Err(MalformedLine::EmptyToken));
        assert_eq!(parse_ngram_line("a\tMDCC\t1\t1"), Err(MalformedLine::BadYear));
        assert_eq!(parse_ngram_line("a\t1900\t-1\t1"), Err(MalformedLine::BadMatchCount));
        assert_eq!(parse_ngram_line("a\t1900\t+1\t1"), Err(MalformedLine::BadMatchCount));
        assert_eq!(parse_ngram_line("a\t1900\t1\tx"), Err(MalformedLine::BadVolumeCount));
        assert_eq!(parse_ngram_line("a\t1900\t"), Err(MalformedLine::BadMatchCount));
        assert_eq!(parse_ngram_bytes(b"a\xff\t1900\t1\t1"), Err(MalformedLine::InvalidUtf8));
    }

    #[test]
    fn totals_lines() {
        assert_eq!(parse_totals_line("1800,100,10,1\t1801,200,20,2"), Ok(vec![(1800, 100), (1801, 200)]));
        assert_eq!(parse_totals_line(""), Ok(vec![]));
        // Google's totals file starts with a leading space and ends with a tab
        assert_eq!(parse_totals_line(" 1505,32059,231,1\t"), Ok(vec![(1505, 32059)]));
        assert_eq!(parse_totals_line("1800,x,10,1"), Err(MalformedLine::BadTotalsEntry));
        assert_eq!(parse_totals_line("1800,1,10"), Err(MalformedLine::BadTotalsEntry));
        assert_eq!(parse_totals_line("1800,1,10,1,1"), Err(MalformedLine::BadTotalsEntry));
    }
}

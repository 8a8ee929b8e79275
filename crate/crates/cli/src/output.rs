//! CSV output: RFC-4180 quoting, LF line endings, 12 significant digits.

use std::io::Write;
use std::path::Path;

/// Formats `x` like C's `%.12g`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        trim_zeros(&format!("{x:.*}", (11 - exp) as usize)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

/// Accumulates a CSV document in memory.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .quote_style(csv::QuoteStyle::Necessary)
            .from_writer(Vec::new());
        writer.write_record(header).expect("in-memory write");
        Self { writer }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).expect("in-memory write");
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.writer.into_inner().expect("in-memory flush")
    }

    /// Writes to `out`, or to `stdout` when `out` is `-`.
    pub fn emit(self, out: &Path, stdout: &mut dyn Write) -> std::io::Result<()> {
        let bytes = self.into_bytes();
        if out.as_os_str() == "-" {
            stdout.write_all(&bytes)?;
            stdout.flush()
        } else {
            std::fs::write(out, bytes)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (0.0, "0"),
            (-0.0, "0"),
            (2.5, "2.5"),
            (3.25, "3.25"),
            (0.375, "0.375"),
            (1.0 / 3.0, "0.333333333333"),
            (-2.0 / 3.0, "-0.666666666667"),
            (1e-5, "1e-05"),
            (1.5e-5, "1.5e-05"),
            (0.0001, "0.0001"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (9.999999999999995, "10"),
            (1900.0, "1900"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_num(x), want, "{x}");
        }
    }

    #[test]
    fn csv_quoting() {
        let mut t = Table::new(&["token", "v"]);
        t.row(["a,b", "1"]);
        t.row(["say \"hi\"", ""]);
        assert_eq!(String::from_utf8(t.into_bytes()).unwrap(), "token,v\n\"a,b\",1\n\"say \"\"hi\"\"\",\n");
    }
}

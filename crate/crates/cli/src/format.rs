//! Output encodings shared by the subcommands.
//!
//! CSV: comma separator, `.` decimal point, one header row, floats in shortest
//! round-trip notation. JSON: compact, one document per output,
//! finite floats with 17 significant digits and non-finite ones as `null`.

use std::io::{self, Write};

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// `serde_json` formatter printing every finite `f64` as `d.dddddddddddddddde±x`.
struct SignificantDigits;

impl serde_json::ser::Formatter for SignificantDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SignificantDigits);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> io::Result<()> {
    let s = to_json(value).map_err(io::Error::other)?;
    out.write_all(s.as_bytes())
}

/// Shortest round-trip text of `v`, switching to exponent form outside
/// `[1e-5, 1e16)` in magnitude.
pub fn float(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-5..1e16).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

/// Quotes a CSV field when it contains a separator, quote or newline.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes one CSV line from already formatted fields.
pub fn csv_row<S: AsRef<str>>(out: &mut dyn Write, fields: &[S]) -> io::Result<()> {
    let line: Vec<String> = fields.iter().map(|f| csv_field(f.as_ref())).collect();
    writeln!(out, "{}", line.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_floats_have_seventeen_digits() {
        let s = to_json(&vec![0.1, 1.0, -2.5e-300, f64::NAN]).unwrap();
        assert_eq!(
            s,
            "[1.0000000000000001e-1,1.0000000000000000e0,-2.5000000000000000e-300,null]\n"
        );
        let back: Vec<Option<f64>> = serde_json::from_str(&s).unwrap();
        assert_eq!(back[0], Some(0.1));
        assert_eq!(back[3], None);
    }

    #[test]
    fn float_text_round_trips() {
        for v in [
            0.0,
            1.0,
            0.2,
            2.2057894795119611e-16,
            -3e20,
            12345.678,
            1e-5,
            f64::MIN_POSITIVE,
        ] {
            assert_eq!(float(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(float(2.5e-16), "2.5e-16");
        assert_eq!(float(1.64), "1.64");
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("1,2"), "\"1,2\"");
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a\"b"), "\"a\"\"b\"");
        let mut buf = Vec::new();
        csv_row(&mut buf, &["k", "1,2,1,2"]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "k,\"1,2,1,2\"\n");
    }
}

//! Deterministic machine-first output: JSON with every floating-point
//! number rendered at exactly nine significant digits, so repeated runs are
//! byte-identical and every value carries more precision than any of the
//! toolkit's tolerances.

use serde::Serialize;
use std::io;

/// Renders a finite float with nine significant digits, using plain decimal
/// notation for moderate exponents and scientific notation otherwise.
/// Deterministic: the same value always yields the same bytes.
pub fn fmt_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    debug_assert!(x.is_finite(), "non-finite values are not serializable");
    // "{:.8e}" yields a normalized "d.ddddddddeE" form with 9 mantissa
    // digits; re-place the decimal point from there.
    let s = format!("{x:.8e}");
    let (mant, exp) = s.split_once('e').expect("exponent notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    let neg = mant.starts_with('-');
    let digits: String = mant.chars().filter(char::is_ascii_digit).collect();
    debug_assert_eq!(digits.len(), 9);
    let body = if (-4..=8).contains(&exp) {
        if exp >= 0 {
            let split = exp as usize + 1;
            let (int, frac) = digits.split_at(split);
            if frac.is_empty() {
                int.to_string()
            } else {
                format!("{int}.{frac}")
            }
        } else {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
        }
    } else {
        format!("{}.{}e{}", &digits[..1], &digits[1..], exp)
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// A `serde_json` formatter identical to the compact default except that
/// floats go through [`fmt_sig9`].
struct Sig9Formatter;

impl serde_json::ser::Formatter for Sig9Formatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        writer.write_all(fmt_sig9(value).as_bytes())
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        writer.write_all(fmt_sig9(f64::from(value)).as_bytes())
    }
}

/// Serializes a document to one line of compact JSON with nine-significant-
/// digit floats.
pub fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig9Formatter);
    value
        .serialize(&mut ser)
        .expect("in-memory JSON serialization cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

//! Printed forms of runtime values. The compiled runtime implements the same
//! rules, so these functions define the observable output format.

/// Shortest round-trip decimal for a 64-bit real, laid out like Python's
/// `repr`: positional for exponents in `[-4, 16)`, otherwise `d.dde+XX`.
pub fn format_real(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    layout(&format!("{v:e}"))
}

/// Same layout, with digits chosen for 32-bit round trip.
pub fn format_real32(v: f32) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    layout(&format!("{v:e}"))
}

fn layout(sci: &str) -> String {
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("exponent");
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if (-4..16).contains(&exp) {
        if exp < 0 {
            out.push_str("0.");
            for _ in 0..(-exp - 1) {
                out.push('0');
            }
            out.push_str(&digits);
        } else {
            let int_len = exp as usize + 1;
            if digits.len() <= int_len {
                out.push_str(&digits);
                for _ in digits.len()..int_len {
                    out.push('0');
                }
                out.push_str(".0");
            } else {
                out.push_str(&digits[..int_len]);
                out.push('.');
                out.push_str(&digits[int_len..]);
            }
        }
    } else {
        out.push_str(&digits[..1]);
        if digits.len() > 1 {
            out.push('.');
            out.push_str(&digits[1..]);
        }
        out.push('e');
        out.push(if exp < 0 { '-' } else { '+' });
        out.push_str(&format!("{:02}", exp.abs()));
    }
    out
}

/// Python `repr` of a complex value. Parts drop the trailing `.0`, and a
/// positive-zero real part is omitted entirely.
pub fn format_complex(re: f64, im: f64, real32: bool) -> String {
    let part = |v: f64| {
        let s = if real32 {
            format_real32(v as f32)
        } else {
            format_real(v)
        };
        match s.strip_suffix(".0") {
            Some(t) => t.to_string(),
            None => s,
        }
    };
    let imag = part(im);
    if re == 0.0 && re.is_sign_positive() {
        return format!("{imag}j");
    }
    let sign = if im.is_sign_negative() && !im.is_nan() { "" } else { "+" };
    format!("({}{}{}j)", part(re), sign, imag)
}

/// Python `repr` of a string: single quotes unless the text contains a single
/// quote and no double quote.
pub fn repr_str(s: &str) -> String {
    repr_bytes(s.as_bytes())
}

/// `repr_str` over raw bytes; non-printable bytes use `\x` escapes.
pub fn repr_bytes(s: &[u8]) -> String {
    let quote = if s.contains(&b'\'') && !s.contains(&b'"') {
        '"'
    } else {
        '\''
    };
    let mut out = String::with_capacity(s.len() + 2);
    out.push(quote);
    for &b in s {
        match b {
            b'\\' => out.push_str("\\\\"),
            b'\n' => out.push_str("\\n"),
            b'\r' => out.push_str("\\r"),
            b'\t' => out.push_str("\\t"),
            b if b as char == quote => {
                out.push('\\');
                out.push(quote);
            }
            0x20..=0x7e => out.push(b as char),
            b => out.push_str(&format!("\\x{b:02x}")),
        }
    }
    out.push(quote);
    out
}

pub fn format_bool(b: bool) -> &'static str {
    if b {
        "True"
    } else {
        "False"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positional_range() {
        assert_eq!(format_real(4.3), "4.3");
        assert_eq!(format_real(3.5), "3.5");
        assert_eq!(format_real(1.0), "1.0");
        assert_eq!(format_real(-0.0), "-0.0");
        assert_eq!(format_real(0.0), "0.0");
        assert_eq!(format_real(0.0001), "0.0001");
        assert_eq!(format_real(1e15), "1000000000000000.0");
        assert_eq!(format_real(123.456), "123.456");
        assert_eq!(format_real(0.1 + 0.2), "0.30000000000000004");
    }

    #[test]
    fn exponent_range() {
        assert_eq!(format_real(1e16), "1e+16");
        assert_eq!(format_real(1e-5), "1e-05");
        assert_eq!(format_real(-2.5e-7), "-2.5e-07");
        assert_eq!(format_real(1.7976931348623157e308), "1.7976931348623157e+308");
    }

    #[test]
    fn specials() {
        assert_eq!(format_real(f64::NAN), "nan");
        assert_eq!(format_real(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn real32_digits() {
        assert_eq!(format_real32(0.1f32), "0.1");
        assert_eq!(format_real32(16777216.0f32), "16777216.0");
    }

    #[test]
    fn round_trips() {
        for v in [0.1, 2.0 / 3.0, 1e-300, 6.02214076e23, 5e-324, 123456789.125] {
            let s = format_real(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
    }

    #[test]
    fn complex_layout() {
        assert_eq!(format_complex(1.0, 2.0, false), "(1+2j)");
        assert_eq!(format_complex(1.5, -2.0, false), "(1.5-2j)");
        assert_eq!(format_complex(0.0, 4.0, false), "4j");
        assert_eq!(format_complex(-0.0, 4.0, false), "(-0+4j)");
        assert_eq!(format_complex(4.3, 1e16, false), "(4.3+1e+16j)");
        assert_eq!(format_complex(0.0, -0.0, false), "-0j");
        assert_eq!(format_complex(f64::NAN, f64::NAN, false), "(nan+nanj)");
    }

    #[test]
    fn string_repr() {
        assert_eq!(repr_str("a"), "'a'");
        assert_eq!(repr_str("it's"), "\"it's\"");
        assert_eq!(repr_str("a'\"b"), "'a\\'\"b'");
        assert_eq!(repr_str("x\ny\\"), "'x\\ny\\\\'");
        assert_eq!(repr_str("\u{1}"), "'\\x01'");
    }
}

use std::cell::RefCell;
use std::rc::Rc;

/// A slot's contents. `Null` is an unset handle: the empty string, the empty
/// vector or 0j depending on the slot's type.
#[derive(Debug, Clone)]
pub enum Value {
    Int(i64),
    Real(f64),
    Str(Rc<Vec<u8>>),
    Complex(Rc<RefCell<(f64, f64)>>),
    Vector(Rc<RefCell<Vec<Value>>>),
    Lambda(Rc<Closure>),
    Null,
}

/// A function value: its id plus the frame bases of every enclosing level.
#[derive(Debug)]
pub struct Closure {
    pub fn_id: i64,
    pub env: Vec<usize>,
}

impl Value {
    pub fn complex(re: f64, im: f64) -> Value {
        Value::Complex(Rc::new(RefCell::new((re, im))))
    }

    pub fn int(&self) -> i64 {
        match self {
            Value::Int(i) => *i,
            _ => 0,
        }
    }

    pub fn real(&self) -> f64 {
        match self {
            Value::Real(r) => *r,
            _ => 0.0,
        }
    }

    pub fn parts(&self) -> (f64, f64) {
        match self {
            Value::Complex(c) => *c.borrow(),
            _ => (0.0, 0.0),
        }
    }

    pub fn bytes(&self) -> Rc<Vec<u8>> {
        match self {
            Value::Str(s) => s.clone(),
            _ => Rc::new(Vec::new()),
        }
    }

    pub fn items(&self) -> Vec<Value> {
        match self {
            Value::Vector(v) => v.borrow().clone(),
            _ => Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn len(&self) -> i64 {
        match self {
            Value::Str(s) => s.len() as i64,
            Value::Vector(v) => v.borrow().len() as i64,
            _ => 0,
        }
    }
}

/// Floor modulo in the configured real width. Assumes `b != 0`.
pub fn mod_real(a: f64, b: f64, real32: bool) -> f64 {
    if !real32 {
        return crate::config::mod_real(a, b);
    }
    let (a, b) = (a as f32, b as f32);
    let r = a % b;
    let r = if r == 0.0 {
        0.0f32.copysign(b)
    } else if (r < 0.0) != (b < 0.0) {
        r + b
    } else {
        r
    };
    r as f64
}

/// Smith's algorithm with each intermediate rounded by `r`. `None` on a
/// zero divisor.
pub fn cdiv(x: (f64, f64), y: (f64, f64), r: impl Fn(f64) -> f64) -> Option<(f64, f64)> {
    let (abr, abi) = (y.0.abs(), y.1.abs());
    if abr >= abi {
        if abr == 0.0 {
            return None;
        }
        let ratio = r(y.1 / y.0);
        let denom = r(y.0 + r(y.1 * ratio));
        Some((r(r(x.0 + r(x.1 * ratio)) / denom), r(r(x.1 - r(x.0 * ratio)) / denom)))
    } else if abi >= abr {
        let ratio = r(y.0 / y.1);
        let denom = r(r(y.0 * ratio) + y.1);
        Some((r(r(r(x.0 * ratio) + x.1) / denom), r(r(r(x.1 * ratio) - x.0) / denom)))
    } else {
        Some((f64::NAN, f64::NAN))
    }
}

const STRIP_CAP: usize = 128;

fn strip(s: &[u8]) -> Option<&[u8]> {
    // C isspace in the default locale.
    let ws = |b: &u8| matches!(b, b' ' | b'\t' | b'\n' | b'\x0b' | b'\x0c' | b'\r');
    let start = s.iter().position(|b| !ws(b)).unwrap_or(s.len());
    let end = s.iter().rposition(|b| !ws(b)).map_or(start, |e| e + 1);
    let t = &s[start..end];
    (t.len() < STRIP_CAP && !t.contains(&0)).then_some(t)
}

/// Optional sign then decimal digits, as a 64-bit pattern. The caller wraps
/// to the configured width.
pub fn parse_int(s: &[u8]) -> Option<i64> {
    let t = strip(s)?;
    let (neg, digits) = match t.first() {
        Some(b'-') => (true, &t[1..]),
        Some(b'+') => (false, &t[1..]),
        _ => (false, t),
    };
    if digits.is_empty() || !digits.iter().all(u8::is_ascii_digit) {
        return None;
    }
    let mut v: u64 = 0;
    for d in digits {
        v = v.checked_mul(10)?.checked_add(u64::from(d - b'0'))?;
    }
    if v > i64::MAX as u64 + u64::from(neg) {
        return None;
    }
    Some(if neg { 0u64.wrapping_sub(v) as i64 } else { v as i64 })
}

/// Decimal real text, `inf`, `infinity` or `nan` in any case.
pub fn parse_real(s: &[u8], real32: bool) -> Option<f64> {
    let t = std::str::from_utf8(strip(s)?).ok()?;
    let body = t.strip_prefix(['+', '-']).unwrap_or(t);
    let lower = body.to_ascii_lowercase();
    if body.is_empty() || lower.starts_with("0x") || lower.starts_with("nan(") {
        return None;
    }
    if real32 {
        t.parse::<f32>().ok().map(f64::from)
    } else {
        t.parse::<f64>().ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn int_text() {
        assert_eq!(parse_int(b"  -42\n"), Some(-42));
        assert_eq!(parse_int(b"+7"), Some(7));
        assert_eq!(parse_int(b"-9223372036854775808"), Some(i64::MIN));
        assert_eq!(parse_int(b"9223372036854775808"), None);
        assert_eq!(parse_int(b"1_0"), None);
        assert_eq!(parse_int(b""), None);
        assert_eq!(parse_int(b"-"), None);
    }

    #[test]
    fn real_text() {
        assert_eq!(parse_real(b" 2.5 ", false), Some(2.5));
        assert_eq!(parse_real(b"1e3", false), Some(1000.0));
        assert_eq!(parse_real(b"-Infinity", false), Some(f64::NEG_INFINITY));
        assert!(parse_real(b"nan", false).unwrap().is_nan());
        assert_eq!(parse_real(b"0x10", false), None);
        assert_eq!(parse_real(b"1e", false), None);
        assert_eq!(parse_real(b"0.1", true), Some(0.1f32 as f64));
    }

    #[test]
    fn complex_division() {
        let id = |v| v;
        assert_eq!(cdiv((1.0, 0.0), (0.0, 1.0), id), Some((0.0, -1.0)));
        assert_eq!(cdiv((4.0, 2.0), (2.0, 0.0), id), Some((2.0, 1.0)));
        assert_eq!(cdiv((1.0, 1.0), (0.0, 0.0), id), None);
    }

    #[test]
    fn real_modulo_sign() {
        assert_eq!(mod_real(-7.0, 3.0, false), 2.0);
        assert!(mod_real(6.0, -3.0, true).is_sign_negative());
    }
}

//! Numeric model shared by inference, folding, the oracle and codegen.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumericConfig {
    /// 32 or 64.
    pub int_bits: u32,
    /// 32 or 64.
    pub real_bits: u32,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            int_bits: 32,
            real_bits: 64,
        }
    }
}

impl NumericConfig {
    pub fn new(int_bits: u32, real_bits: u32) -> Self {
        NumericConfig { int_bits, real_bits }
    }

    /// Two's-complement wrap to the configured width.
    pub fn wrap(&self, v: i64) -> i64 {
        if self.int_bits == 32 {
            v as i32 as i64
        } else {
            v
        }
    }

    pub fn int_min(&self) -> i64 {
        if self.int_bits == 32 {
            i32::MIN as i64
        } else {
            i64::MIN
        }
    }

    pub fn int_max(&self) -> i64 {
        if self.int_bits == 32 {
            i32::MAX as i64
        } else {
            i64::MAX
        }
    }

    pub fn real32(&self) -> bool {
        self.real_bits == 32
    }

    /// Round a real to the configured precision.
    pub fn real(&self, v: f64) -> f64 {
        if self.real32() {
            v as f32 as f64
        } else {
            v
        }
    }

    /// Convert an int to the configured real type the way C does.
    pub fn int_to_real(&self, v: i64) -> f64 {
        if self.real32() {
            v as f32 as f64
        } else {
            v as f64
        }
    }

    /// Value of a real literal as the C compiler reads it.
    pub fn real_literal(&self, v: f64) -> f64 {
        if self.real32() {
            crate::format::format_real(v)
                .parse::<f32>()
                .map(|f| f as f64)
                .unwrap_or(v)
        } else {
            v
        }
    }

    pub fn format_real(&self, v: f64) -> String {
        if self.real32() {
            crate::format::format_real32(v as f32)
        } else {
            crate::format::format_real(v)
        }
    }

    /// `base ** exp` on ints with wrap; negative exponents give 0 except for
    /// bases 1 and -1. `None` means division by zero.
    pub fn pow_int(&self, base: i64, exp: i64) -> Option<i64> {
        if exp < 0 {
            return match base {
                0 => None,
                1 => Some(1),
                -1 => Some(if exp % 2 == 0 { 1 } else { -1 }),
                _ => Some(0),
            };
        }
        let mut result: i64 = 1;
        let mut b = self.wrap(base);
        let mut e = exp as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = self.wrap(result.wrapping_mul(b));
            }
            b = self.wrap(b.wrapping_mul(b));
            e >>= 1;
        }
        Some(result)
    }

    /// Floor modulo; `None` on a zero divisor.
    pub fn mod_int(&self, a: i64, b: i64) -> Option<i64> {
        if b == 0 {
            return None;
        }
        let r = a.wrapping_rem(b);
        let r = if r != 0 && ((r < 0) != (b < 0)) { r + b } else { r };
        Some(self.wrap(r))
    }
}

/// Floor modulo on reals; a zero result takes the divisor's sign.
pub fn mod_real(a: f64, b: f64) -> f64 {
    let r = a % b;
    if r == 0.0 {
        0.0f64.copysign(b)
    } else if (r < 0.0) != (b < 0.0) {
        r + b
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_wraps() {
        let c = NumericConfig::default();
        assert_eq!(c.pow_int(2, 31), Some(-2147483648));
        assert_eq!(c.pow_int(2, 32), Some(0));
        assert_eq!(c.pow_int(3, 4), Some(81));
        assert_eq!(c.pow_int(-1, -3), Some(-1));
        assert_eq!(c.pow_int(2, -1), Some(0));
        assert_eq!(c.pow_int(0, -1), None);
        let c64 = NumericConfig::new(64, 64);
        assert_eq!(c64.pow_int(2, 40), Some(1 << 40));
    }

    #[test]
    fn floor_mod() {
        let c = NumericConfig::default();
        assert_eq!(c.mod_int(-7, 3), Some(2));
        assert_eq!(c.mod_int(7, -3), Some(-2));
        assert_eq!(c.mod_int(i32::MIN as i64, -1), Some(0));
        assert_eq!(mod_real(-7.5, 2.0), 0.5);
    }
}

//! Scalar types the analysis can run over.
//!
//! Everything structural in this crate only cares about which coefficients
//! vanish, so the same code runs over exact rationals (tolerance zero) and
//! over floating point (small absolute tolerance).

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use serde_json::Value;

pub trait Scalar: Clone + Debug + Display + PartialEq + PartialOrd + Num + Signed + Send + Sync + 'static {
    /// True when arithmetic is exact (no rounding).
    const EXACT: bool;

    /// Threshold under which a coefficient is treated as zero.
    fn default_tolerance() -> Self;

    fn from_f64_lossy(x: f64) -> Self;

    fn to_f64_lossy(&self) -> f64;

    fn from_ratio(num: &BigInt, den: &BigInt) -> Self;

    /// Parses a JSON number literal (integer or decimal, optional exponent).
    fn from_decimal_str(s: &str) -> Option<Self> {
        let (num, den) = parse_decimal(s)?;
        Some(Self::from_ratio(&num, &den))
    }

    /// Square root when it exists in this number system.
    ///
    /// Floats always succeed for nonnegative input; rationals only for
    /// perfect squares.
    fn try_sqrt(&self) -> Option<Self>;

    fn is_finite_value(&self) -> bool;

    fn to_json(&self) -> Value;

    /// `|self| > tol`
    fn exceeds(&self, tol: &Self) -> bool {
        self.abs() > *tol
    }
}

macro_rules! float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn default_tolerance() -> Self {
                $tol
            }

            fn from_f64_lossy(x: f64) -> Self {
                x as $t
            }

            fn to_f64_lossy(&self) -> f64 {
                *self as f64
            }

            fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
                let r = BigRational::new(num.clone(), den.clone());
                r.to_f64().unwrap_or(f64::NAN) as $t
            }

            fn from_decimal_str(s: &str) -> Option<Self> {
                <$t>::from_str(s.trim()).ok()
            }

            fn try_sqrt(&self) -> Option<Self> {
                if *self < 0.0 {
                    None
                } else {
                    Some(self.sqrt())
                }
            }

            fn is_finite_value(&self) -> bool {
                self.is_finite()
            }

            fn to_json(&self) -> Value {
                serde_json::Number::from_f64(*self as f64).map(Value::Number).unwrap_or(Value::Null)
            }
        }
    };
}

float_scalar!(f64, 1e-12);
float_scalar!(f32, 1e-6);

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn default_tolerance() -> Self {
        BigRational::zero()
    }

    fn from_f64_lossy(x: f64) -> Self {
        BigRational::from_f64(x).unwrap_or_else(BigRational::zero)
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        BigRational::new(num.clone(), den.clone())
    }

    fn try_sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(BigRational::new(n, d))
        } else {
            None
        }
    }

    fn is_finite_value(&self) -> bool {
        true
    }

    fn to_json(&self) -> Value {
        let int =
            |b: &BigInt| -> Value { serde_json::from_str(&b.to_string()).expect("integer literal is valid JSON") };
        if self.denom().is_one() {
            int(self.numer())
        } else {
            let mut map = serde_json::Map::new();
            map.insert("num".into(), int(self.numer()));
            map.insert("den".into(), int(self.denom()));
            Value::Object(map)
        }
    }
}

/// Splits a decimal literal such as `-12.5e-3` into an exact fraction.
pub fn parse_decimal(s: &str) -> Option<(BigInt, BigInt)> {
    let s = s.trim();
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(pos) => (&digits[..pos], &digits[pos + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut num = BigInt::from_str_radix(&all_digits, 10).ok()?;
    if negative {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i64;
    if scale.unsigned_abs() > 4096 {
        return None;
    }
    let ten = BigInt::from(10u32);
    let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        Some((num * pow, BigInt::one()))
    } else {
        Some((num, pow))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn decimal_literals_are_exact() {
        assert_eq!(BigRational::from_decimal_str("0.1"), Some(q(1, 10)));
        assert_eq!(BigRational::from_decimal_str("-2.50e1"), Some(q(-25, 1)));
        assert_eq!(BigRational::from_decimal_str("3E-2"), Some(q(3, 100)));
        assert_eq!(BigRational::from_decimal_str("7"), Some(q(7, 1)));
        assert_eq!(BigRational::from_decimal_str("abc"), None);
        assert_eq!(BigRational::from_decimal_str("."), None);
    }

    #[test]
    fn rational_sqrt_only_for_squares() {
        assert_eq!(q(9, 4).try_sqrt(), Some(q(3, 2)));
        assert_eq!(q(2, 1).try_sqrt(), None);
        assert_eq!(q(-4, 1).try_sqrt(), None);
        assert_eq!(4.0f64.try_sqrt(), Some(2.0));
    }

    #[test]
    fn json_forms() {
        assert_eq!(q(3, 1).to_json().to_string(), "3");
        assert_eq!(q(-1, 3).to_json().to_string(), r#"{"num":-1,"den":3}"#);
        assert_eq!(0.5f64.to_json().to_string(), "0.5");
    }

    #[test]
    fn threshold() {
        assert!(2.0f64.exceeds(&1e-12));
        assert!(!1e-15f64.exceeds(&1e-12));
        assert!(q(1, 1_000_000).exceeds(&BigRational::zero()));
    }
}

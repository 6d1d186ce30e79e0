use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use dashu_base::{Abs, Sign};
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;

use super::BigReal;
use crate::error::{Error, Result};

/// Exact rational scalar. Used to check terminating identities with zero
/// tolerance.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exact(RBig);

impl Exact {
    pub fn new(value: RBig) -> Self {
        Exact(value)
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Exact(RBig::from_parts_signed(IBig::from(num), IBig::from(den)))
    }

    pub fn from_int(value: i64) -> Self {
        Exact(RBig::from(IBig::from(value)))
    }

    pub fn inner(&self) -> &RBig {
        &self.0
    }

    pub fn into_inner(self) -> RBig {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.numerator().is_zero()
    }

    pub fn sign(&self) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else if self.0.sign() == Sign::Negative {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    pub fn abs(&self) -> Self {
        Exact(self.0.clone().abs())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Exact(&self.0 / &rhs.0))
    }

    pub fn to_real(&self, precision: usize) -> BigReal {
        BigReal::from_rational(&self.0, precision)
    }
}

/// Parses `p/r`, a plain integer, or a decimal literal with optional
/// exponent (`0.3`, `-1.25e-4`) into an exact rational.
pub fn parse_rational(text: &str) -> Result<RBig> {
    let s = text.trim();
    let bad = || Error::Parse(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = IBig::from_str(num.trim()).map_err(|_| bad())?;
        let den = IBig::from_str(den.trim()).map_err(|_| bad())?;
        if den == IBig::ZERO {
            return Err(bad());
        }
        return Ok(RBig::from_parts_signed(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut num = IBig::from(UBig::from_str(&all_digits).map_err(|_| bad())?);
    if negative {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i64;
    let ten = UBig::from(10u8);
    let value = if scale >= 0 {
        RBig::from(num * IBig::from(ten.pow(scale as usize)))
    } else {
        RBig::from_parts(num, ten.pow((-scale) as usize))
    };
    Ok(value)
}

impl FromStr for Exact {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s).map(Exact)
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = (self.0.numerator(), self.0.denominator());
        if *den == UBig::ONE {
            write!(f, "{num}")
        } else {
            write!(f, "{num}/{den}")
        }
    }
}

macro_rules! exact_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Exact {
            type Output = Exact;
            fn $method(self, rhs: Exact) -> Exact {
                Exact(self.0 $op rhs.0)
            }
        }
        impl<'a> $trait<&'a Exact> for Exact {
            type Output = Exact;
            fn $method(self, rhs: &'a Exact) -> Exact {
                Exact(self.0 $op &rhs.0)
            }
        }
    };
}

exact_binop!(Add, add, +);
exact_binop!(Sub, sub, -);
exact_binop!(Mul, mul, *);

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        Exact(-self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_and_decimal_literals() {
        let cases = [
            ("1/2", Exact::from_ratio(1, 2)),
            ("-3/9", Exact::from_ratio(-1, 3)),
            ("0.3", Exact::from_ratio(3, 10)),
            ("-1.25e-2", Exact::from_ratio(-1, 80)),
            ("1e-3", Exact::from_ratio(1, 1000)),
            ("2.5E1", Exact::from_int(25)),
            ("7", Exact::from_int(7)),
            (".5", Exact::from_ratio(1, 2)),
        ];
        for (text, want) in cases {
            assert_eq!(text.parse::<Exact>().unwrap(), want, "{text}");
        }
    }

    #[test]
    fn rejects_malformed_literals() {
        for text in ["", "1/0", "abc", "1.2.3", "-", "1e", "0x10"] {
            assert!(parse_rational(text).is_err(), "{text}");
        }
    }

    #[test]
    fn display_is_reduced() {
        assert_eq!(Exact::from_ratio(6, -4).to_string(), "-3/2");
        assert_eq!(Exact::from_ratio(8, 4).to_string(), "2");
    }
}

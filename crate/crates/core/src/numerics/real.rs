use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use dashu_base::{Abs, BitTest, Sign, SquareRoot, UnsignedAbs};
use dashu_float::round::mode::HalfEven;
use dashu_float::{Context, FBig};
use dashu_int::IBig;
use dashu_ratio::RBig;

use crate::error::{Error, Result};

type Inner = FBig<HalfEven>;

/// Arbitrary-precision binary floating-point value with an explicit working
/// precision, rounded half-to-even after every operation.
///
/// The precision of an arithmetic result is the larger of the two operand
/// precisions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BigReal(Inner);

impl BigReal {
    fn ctx(precision: usize) -> Context<HalfEven> {
        Context::new(precision.max(1))
    }

    pub(crate) fn from_inner(inner: Inner) -> Self {
        BigReal(inner)
    }

    pub fn zero(precision: usize) -> Self {
        Self::from_i64(0, precision)
    }

    pub fn one(precision: usize) -> Self {
        Self::from_i64(1, precision)
    }

    pub fn from_i64(value: i64, precision: usize) -> Self {
        BigReal(Self::ctx(precision).convert_int(IBig::from(value)).value())
    }

    pub fn from_ibig(value: IBig, precision: usize) -> Self {
        BigReal(Self::ctx(precision).convert_int(value).value())
    }

    /// `num / den` rounded to `precision` bits.
    pub fn from_ratio(num: i64, den: i64, precision: usize) -> Self {
        let ctx = Self::ctx(precision);
        let n: Inner = ctx.convert_int(IBig::from(num)).value();
        let d: Inner = ctx.convert_int(IBig::from(den)).value();
        BigReal(ctx.div(n.repr(), d.repr()).value())
    }

    pub fn from_rational(value: &RBig, precision: usize) -> Self {
        let ctx = Self::ctx(precision);
        let (num, den) = value.clone().into_parts();
        let n: Inner = ctx.convert_int(num).value();
        let d: Inner = ctx.convert_int(IBig::from(den)).value();
        BigReal(ctx.div(n.repr(), d.repr()).value())
    }

    /// `2^exponent` at the given precision (exact).
    pub fn pow2(exponent: isize, precision: usize) -> Self {
        BigReal(
            Inner::from_parts(IBig::ONE, exponent)
                .with_precision(precision.max(1))
                .value(),
        )
    }

    /// Unit roundoff bound `2^(1-p)` for this value's precision.
    pub fn epsilon(precision: usize) -> Self {
        Self::pow2(1 - precision as isize, precision)
    }

    pub fn precision_bits(&self) -> usize {
        self.0.precision()
    }

    pub fn with_precision(&self, precision: usize) -> Self {
        BigReal(self.0.clone().with_precision(precision.max(1)).value())
    }

    pub fn is_zero(&self) -> bool {
        self.0.repr().is_zero()
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
        BigReal(self.0.clone().abs())
    }

    pub fn max_of(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.precision_bits().max(rhs.precision_bits());
        Ok(BigReal(Self::ctx(p).div(self.0.repr(), rhs.0.repr()).value()))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one(self.precision_bits()).checked_div(self)
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.sign() == Ordering::Less {
            return Err(Error::InvalidArgument("square root of a negative value".into()));
        }
        Ok(BigReal(self.0.sqrt()))
    }

    pub fn exp(&self) -> Self {
        BigReal(self.0.exp())
    }

    pub fn powi(&self, n: i64) -> Result<Self> {
        if n < 0 {
            if self.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return BigReal(self.0.powi(IBig::from(-n))).recip();
        }
        Ok(BigReal(self.0.powi(IBig::from(n))))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    /// Base-2 exponent of the leading bit, or `None` for zero.
    pub fn log2_floor(&self) -> Option<isize> {
        if self.is_zero() {
            return None;
        }
        let repr = self.0.repr();
        Some(repr.exponent() + repr.significand().unsigned_abs().bit_len() as isize - 1)
    }

    /// Number of significant decimal digits carried by `precision` bits.
    pub fn decimal_digits(precision: usize) -> usize {
        ((precision as f64) * std::f64::consts::LOG10_2).ceil() as usize
    }

    /// Scientific decimal rendering with as many significant digits as the
    /// binary precision supports, e.g. `-1.2345e-3`. Deterministic across
    /// platforms.
    pub fn to_decimal_string(&self) -> String {
        self.to_decimal_digits(Self::decimal_digits(self.precision_bits()))
    }

    pub fn to_decimal_digits(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let dec = self
            .0
            .clone()
            .with_base_and_precision::<10>(digits.max(1))
            .value();
        let repr = dec.repr();
        let negative = repr.significand().sign() == Sign::Negative;
        let mantissa = repr.significand().unsigned_abs().to_string();
        let mantissa = mantissa.trim_end_matches('0');
        let stripped = repr.significand().unsigned_abs().to_string().len() - mantissa.len();
        let exponent = repr.exponent() + stripped as isize + mantissa.len() as isize - 1;
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        out.push_str(&mantissa[..1]);
        if mantissa.len() > 1 {
            out.push('.');
            out.push_str(&mantissa[1..]);
        }
        out.push('e');
        out.push_str(&exponent.to_string());
        out
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{} bits]", self.to_decimal_string(), self.precision_bits())
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(d) => f.write_str(&self.to_decimal_digits(d)),
            None => f.write_str(&self.to_decimal_string()),
        }
    }
}

impl Add for BigReal {
    type Output = BigReal;
    fn add(self, rhs: BigReal) -> BigReal {
        BigReal(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a BigReal> for BigReal {
    type Output = BigReal;
    fn add(self, rhs: &'a BigReal) -> BigReal {
        BigReal(self.0 + &rhs.0)
    }
}

impl Sub for BigReal {
    type Output = BigReal;
    fn sub(self, rhs: BigReal) -> BigReal {
        BigReal(self.0 - rhs.0)
    }
}

impl<'a> Sub<&'a BigReal> for BigReal {
    type Output = BigReal;
    fn sub(self, rhs: &'a BigReal) -> BigReal {
        BigReal(self.0 - &rhs.0)
    }
}

impl Mul for BigReal {
    type Output = BigReal;
    fn mul(self, rhs: BigReal) -> BigReal {
        BigReal(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a BigReal> for BigReal {
    type Output = BigReal;
    fn mul(self, rhs: &'a BigReal) -> BigReal {
        BigReal(self.0 * &rhs.0)
    }
}

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0)
    }
}

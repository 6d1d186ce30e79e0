use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use super::{BigReal, Exact};
use crate::error::Result;

/// Field-like scalar that every kernel and series evaluator is generic over:
/// [`BigReal`], [`Exact`], and [`Jet2`](super::Jet2) over either.
///
/// Constants are created "like" an existing value so that they inherit its
/// precision (or exactness).
pub trait Scalar:
    Clone
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    /// The constant `num / den` in the same arithmetic context as `self`.
    fn constant_like(&self, num: i64, den: i64) -> Self;

    fn checked_div(&self, rhs: &Self) -> Result<Self>;

    /// True when the value part is exactly zero.
    fn is_zero(&self) -> bool;

    /// Sign of the value part.
    fn sign(&self) -> Ordering;

    /// The value part rounded to a [`BigReal`] of the given precision.
    fn to_real(&self, precision: usize) -> BigReal;

    /// Largest absolute value over all carried components.
    fn magnitude(&self, precision: usize) -> BigReal {
        self.to_real(precision).abs()
    }

    /// Working precision in bits, `None` for exact values.
    fn precision_hint(&self) -> Option<usize>;

    /// Equality up to the rounding allowance of the representation; exact
    /// equality for rationals.
    fn approx_eq(&self, other: &Self) -> bool;

    fn int_like(&self, n: i64) -> Self {
        self.constant_like(n, 1)
    }

    fn zero_like(&self) -> Self {
        self.constant_like(0, 1)
    }

    fn one_like(&self) -> Self {
        self.constant_like(1, 1)
    }

    fn recip(&self) -> Result<Self> {
        self.one_like().checked_div(self)
    }

    fn square(&self) -> Self {
        self.clone() * self
    }

    fn powi(&self, n: i64) -> Result<Self> {
        let mut base = if n < 0 { self.recip()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        Ok(acc)
    }
}

/// Tolerance-aware comparison used by [`Scalar::approx_eq`] for reals:
/// `|x - y| <= 2^(10-p) * max(|x|, |y|)`.
pub(crate) fn real_close(x: &BigReal, y: &BigReal) -> bool {
    let p = x.precision_bits().max(y.precision_bits());
    let scale = BigReal::max_of(&x.abs(), &y.abs());
    let diff = (x.clone() - y).abs();
    diff <= scale * &BigReal::pow2(10 - p as isize, p)
}

impl Scalar for BigReal {
    fn constant_like(&self, num: i64, den: i64) -> Self {
        BigReal::from_ratio(num, den, self.precision_bits())
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        BigReal::checked_div(self, rhs)
    }

    fn is_zero(&self) -> bool {
        BigReal::is_zero(self)
    }

    fn sign(&self) -> Ordering {
        BigReal::sign(self)
    }

    fn to_real(&self, precision: usize) -> BigReal {
        self.with_precision(precision)
    }

    fn precision_hint(&self) -> Option<usize> {
        Some(self.precision_bits())
    }

    fn approx_eq(&self, other: &Self) -> bool {
        real_close(self, other)
    }

    fn powi(&self, n: i64) -> Result<Self> {
        BigReal::powi(self, n)
    }
}

impl Scalar for Exact {
    fn constant_like(&self, num: i64, den: i64) -> Self {
        Exact::from_ratio(num, den)
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Exact::checked_div(self, rhs)
    }

    fn is_zero(&self) -> bool {
        Exact::is_zero(self)
    }

    fn sign(&self) -> Ordering {
        Exact::sign(self)
    }

    fn to_real(&self, precision: usize) -> BigReal {
        Exact::to_real(self, precision)
    }

    fn precision_hint(&self) -> Option<usize> {
        None
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }
}

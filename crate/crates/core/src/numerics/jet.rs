use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{BigReal, Scalar};
use crate::error::{Error, Result};

/// Second-order truncated Taylor value `(f, f', f'')` with respect to a
/// single active parameter.
///
/// Lifting a parameter with [`Jet2::variable`] and pushing it through any
/// rational expression yields the first and second partial derivatives of
/// that expression in the parameter.
#[derive(Clone, PartialEq)]
pub struct Jet2<S> {
    pub v: S,
    pub d1: S,
    pub d2: S,
}

impl<S: Scalar> Jet2<S> {
    pub fn new(v: S, d1: S, d2: S) -> Self {
        Jet2 { v, d1, d2 }
    }

    /// A value independent of the active parameter.
    pub fn constant(c: S) -> Self {
        let zero = c.zero_like();
        Jet2 { d1: zero.clone(), d2: zero, v: c }
    }

    /// The active parameter itself, evaluated at `b0`.
    pub fn variable(b0: S) -> Self {
        Jet2 { d1: b0.one_like(), d2: b0.zero_like(), v: b0 }
    }

    /// First and second logarithmic derivatives: `(f'/f, (log f)'')`.
    ///
    /// `(log f)'' = f''/f - (f'/f)^2`, so `f'' = f * (L1^2 + L2)`.
    pub fn log_derivatives(&self) -> Result<(S, S)> {
        if self.v.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let l1 = self.d1.checked_div(&self.v)?;
        let l2 = self.d2.checked_div(&self.v)? - l1.square();
        Ok((l1, l2))
    }
}

/// Leibniz rule, truncated after the second derivative.
pub fn jet_mul<S: Scalar>(x: &Jet2<S>, y: &Jet2<S>) -> Jet2<S> {
    let v = x.v.clone() * &y.v;
    let d1 = x.v.clone() * &y.d1 + x.d1.clone() * &y.v;
    let cross = x.d1.clone() * &y.d1;
    let d2 = x.v.clone() * &y.d2 + cross.int_like(2) * &cross + x.d2.clone() * &y.v;
    Jet2 { v, d1, d2 }
}

/// Quotient rule, truncated after the second derivative. Fails when the
/// divisor's value vanishes.
pub fn jet_div<S: Scalar>(x: &Jet2<S>, y: &Jet2<S>) -> Result<Jet2<S>> {
    if y.v.is_zero() {
        return Err(Error::DivisionByZero);
    }
    // r = x / y  =>  r' = (x' - r y') / y,  r'' = (x'' - 2 r' y' - r y'') / y
    let v = x.v.checked_div(&y.v)?;
    let d1 = (x.d1.clone() - v.clone() * &y.d1).checked_div(&y.v)?;
    let two = v.int_like(2);
    let d2 = (x.d2.clone() - two * &d1 * &y.d1 - v.clone() * &y.d2).checked_div(&y.v)?;
    Ok(Jet2 { v, d1, d2 })
}

impl<S: Scalar> fmt::Debug for Jet2<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet2({:?}, {:?}, {:?})", self.v, self.d1, self.d2)
    }
}

impl<S: Scalar> Add for Jet2<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Jet2 { v: self.v + rhs.v, d1: self.d1 + rhs.d1, d2: self.d2 + rhs.d2 }
    }
}

impl<'a, S: Scalar> Add<&'a Jet2<S>> for Jet2<S> {
    type Output = Self;
    fn add(self, rhs: &'a Self) -> Self {
        Jet2 { v: self.v + &rhs.v, d1: self.d1 + &rhs.d1, d2: self.d2 + &rhs.d2 }
    }
}

impl<S: Scalar> Sub for Jet2<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Jet2 { v: self.v - rhs.v, d1: self.d1 - rhs.d1, d2: self.d2 - rhs.d2 }
    }
}

impl<'a, S: Scalar> Sub<&'a Jet2<S>> for Jet2<S> {
    type Output = Self;
    fn sub(self, rhs: &'a Self) -> Self {
        Jet2 { v: self.v - &rhs.v, d1: self.d1 - &rhs.d1, d2: self.d2 - &rhs.d2 }
    }
}

impl<S: Scalar> Mul for Jet2<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        jet_mul(&self, &rhs)
    }
}

impl<'a, S: Scalar> Mul<&'a Jet2<S>> for Jet2<S> {
    type Output = Self;
    fn mul(self, rhs: &'a Self) -> Self {
        jet_mul(&self, rhs)
    }
}

impl<S: Scalar> Neg for Jet2<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Jet2 { v: -self.v, d1: -self.d1, d2: -self.d2 }
    }
}

impl<S: Scalar> Scalar for Jet2<S> {
    fn constant_like(&self, num: i64, den: i64) -> Self {
        Jet2::constant(self.v.constant_like(num, den))
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        jet_div(self, rhs)
    }

    fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    fn sign(&self) -> Ordering {
        self.v.sign()
    }

    fn to_real(&self, precision: usize) -> BigReal {
        self.v.to_real(precision)
    }

    fn magnitude(&self, precision: usize) -> BigReal {
        let a = self.v.magnitude(precision);
        let b = self.d1.magnitude(precision);
        let c = self.d2.magnitude(precision);
        BigReal::max_of(&BigReal::max_of(&a, &b), &c)
    }

    fn precision_hint(&self) -> Option<usize> {
        self.v.precision_hint()
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self.v.approx_eq(&other.v) && self.d1.approx_eq(&other.d1) && self.d2.approx_eq(&other.d2)
    }
}

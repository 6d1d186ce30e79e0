//! Shifted factorials, q-shifted factorials and q-integers, generic over
//! every [`Scalar`].

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::numerics::{BigReal, Scalar};

/// A base `q` with `0 < q < 1`.
///
/// Derived bases (`q^2`, `q^4`, ...) are built with [`QParams::power_base`],
/// which recomputes from the stored `q` rather than squaring an already
/// rounded square.
#[derive(Clone, Debug, PartialEq)]
pub struct QParams<S> {
    q: S,
}

impl<S: Scalar> QParams<S> {
    pub fn new(q: S) -> Result<Self> {
        let above_zero = q.sign() == Ordering::Greater;
        let below_one = (q.clone() - q.one_like()).sign() == Ordering::Less;
        if !(above_zero && below_one) {
            return Err(Error::InvalidBase);
        }
        Ok(QParams { q })
    }

    pub fn q(&self) -> &S {
        &self.q
    }

    /// `q^m` for any integer `m`.
    pub fn power(&self, m: i64) -> S {
        // q > 0, so negative powers never divide by zero
        self.q.powi(m).expect("q is nonzero")
    }

    /// The base `q^m`, `m >= 1`.
    pub fn power_base(&self, m: u32) -> QParams<S> {
        assert!(m >= 1, "derived base needs a positive exponent");
        QParams { q: self.power(m as i64) }
    }
}

/// Rising factorial `(x)_n = x (x+1) ... (x+n-1)`.
pub fn pochhammer<S: Scalar>(x: &S, n: usize) -> S {
    let mut acc = x.one_like();
    let mut factor = x.clone();
    let one = x.one_like();
    for _ in 0..n {
        acc = acc * &factor;
        factor = factor + &one;
    }
    acc
}

/// q-integer `[n] = 1 + q + ... + q^(n-1)`.
pub fn q_integer<S: Scalar>(n: i64, q: &QParams<S>) -> Result<S> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!("q-integer index must be positive, got {n}")));
    }
    let mut acc = q.q.zero_like();
    let mut pow = q.q.one_like();
    for _ in 0..n {
        acc = acc + &pow;
        pow = pow * &q.q;
    }
    Ok(acc)
}

/// Finite q-shifted factorial `(x; q)_n = prod_{i<n} (1 - x q^i)`.
///
/// Zero and negative factors are allowed: that is how `(q^-m; q)_k`
/// terminates a series.
pub fn q_pochhammer<S: Scalar>(x: &S, q: &QParams<S>, n: usize) -> S {
    let one = x.one_like();
    let mut acc = one.clone();
    let mut t = x.clone();
    for _ in 0..n {
        acc = acc * (one.clone() - &t);
        t = t * &q.q;
    }
    acc
}

/// A truncated infinite product together with a bound `B` on
/// `|P_inf / P_m - 1|`.
#[derive(Clone, Debug)]
pub struct ProductValue<S> {
    pub value: S,
    pub bound: BigReal,
    pub factors: usize,
}

const MAX_FACTORS: usize = 1 << 20;

/// Infinite q-shifted factorial `(x; q)_inf`.
///
/// Stops at the first `m` with `|x| q^m / (1 - q) < eps / 2`; the reported
/// bound is `exp(u) - 1` with `u = |x| q^m / ((1 - q)(1 - |x| q^m))`.
pub fn q_pochhammer_inf<S: Scalar>(x: &S, q: &QParams<S>, eps: &BigReal) -> Result<ProductValue<S>> {
    if eps.sign() != Ordering::Greater {
        return Err(Error::InvalidArgument("product tolerance must be positive".into()));
    }
    let p = x.precision_hint().unwrap_or(0).max(eps.precision_bits());
    if x.is_zero() {
        return Ok(ProductValue { value: x.one_like(), bound: BigReal::zero(p), factors: 0 });
    }
    let one_r = BigReal::one(p);
    let q_r = q.q.to_real(p);
    let inv_gap = one_r.checked_div(&(one_r.clone() - &q_r))?;
    let half_eps = eps.clone() * &BigReal::from_ratio(1, 2, p);

    let one = x.one_like();
    let mut acc = one.clone();
    let mut t = x.clone();
    let mut mag = x.magnitude(p);
    let mut m = 0usize;
    loop {
        let reach = mag.clone() * &inv_gap;
        if reach < half_eps {
            break;
        }
        if m >= MAX_FACTORS {
            return Err(Error::NoConvergence {
                terms: m,
                reason: "infinite product did not settle".into(),
            });
        }
        let factor = one.clone() - &t;
        if factor.is_zero() {
            return Err(Error::VanishingFactor { index: m });
        }
        acc = acc * &factor;
        t = t * &q.q;
        mag = mag * &q_r;
        m += 1;
    }
    let u = (mag.clone() * &inv_gap).checked_div(&(one_r.clone() - &mag))?;
    let bound = u.exp() - &one_r;
    Ok(ProductValue { value: acc, bound, factors: m })
}

/// Whether a product runs to a finite index or to infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(usize),
    Infinite,
}

/// `(x_1, ..., x_r; q)_m`, the product of the individual factorials.
///
/// For `Order::Infinite` each factor gets the same `eps`, and the combined
/// bound is `prod (1 + B_i) - 1`.
pub fn multi_q_pochhammer<S: Scalar>(
    xs: &[S],
    q: &QParams<S>,
    order: Order,
    eps: &BigReal,
) -> Result<ProductValue<S>> {
    let p = eps.precision_bits();
    let mut value = q.q.one_like();
    let mut growth = BigReal::one(p);
    let mut factors = 0;
    for x in xs {
        match order {
            Order::Finite(n) => {
                value = value * q_pochhammer(x, q, n);
                factors += n;
            }
            Order::Infinite => {
                let part = q_pochhammer_inf(x, q, eps)?;
                value = value * part.value;
                growth = growth * (BigReal::one(p) + part.bound);
                factors += part.factors;
            }
        }
    }
    Ok(ProductValue { value, bound: growth - &BigReal::one(p), factors })
}

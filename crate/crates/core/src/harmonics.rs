//! Generalized harmonic numbers and the coefficient sums `A_k`, `B_n`,
//! `C_k`, `D_n` that multiply the summands after differentiating in `b`.
//!
//! The coefficient sums are written out term by term, independently of
//! the jet machinery, so that comparing them against jet log-derivatives is
//! a genuine check.

use crate::error::{Error, Result};
use crate::numerics::Scalar;
use crate::qkernel::QParams;

fn check_poles<S: Scalar>(k: usize, x: &S, what: &str) -> Result<()> {
    let mut shifted = x.clone();
    let one = x.one_like();
    for i in 1..=k {
        shifted = shifted + &one;
        if shifted.is_zero() {
            return Err(Error::Pole { factor: format!("{what}: x + i"), index: i });
        }
    }
    Ok(())
}

/// `H_k(x) = sum_{i=1}^{k} 1/(x+i)`.
pub fn harmonic<S: Scalar>(k: usize, x: &S) -> Result<S> {
    harmonic_m(k, 1, x)
}

/// `H_k^(m)(x) = sum_{i=1}^{k} 1/(x+i)^m`.
pub fn harmonic_m<S: Scalar>(k: usize, m: u32, x: &S) -> Result<S> {
    if m == 0 {
        return Err(Error::InvalidArgument("harmonic order must be positive".into()));
    }
    check_poles(k, x, "harmonic number")?;
    let one = x.one_like();
    let mut shifted = x.clone();
    let mut acc = x.zero_like();
    for _ in 1..=k {
        shifted = shifted + &one;
        acc = acc + shifted.powi(-(m as i64))?;
    }
    Ok(acc)
}

/// Which family of coefficient sums to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// From the terminating 7F6 in ordinary Pochhammer symbols.
    Classical,
    /// From the truncated quadratic q-summation (mixed bases q and q^2).
    QQuadratic,
    /// From the specialised 8phi7 (base q only).
    QLinear,
}

/// Parameters for the coefficient sums. `c` is only needed by `B` and `D`.
#[derive(Clone, Debug)]
pub struct AbcdArgs<S> {
    pub flavor: Flavor,
    pub a: S,
    pub b: S,
    pub c: Option<S>,
    pub q: Option<QParams<S>>,
}

impl<S: Scalar> AbcdArgs<S> {
    pub fn new(flavor: Flavor, a: S, b: S, c: Option<S>, q: Option<QParams<S>>) -> Result<Self> {
        match (flavor, &q) {
            (Flavor::Classical, Some(_)) => {
                return Err(Error::InvalidArgument("classical coefficients take no base".into()))
            }
            (Flavor::QQuadratic | Flavor::QLinear, None) => {
                return Err(Error::MissingParameter("q".into()))
            }
            _ => {}
        }
        Ok(AbcdArgs { flavor, a, b, c, q })
    }

    pub fn classical(a: S, b: S, c: Option<S>) -> Self {
        AbcdArgs { flavor: Flavor::Classical, a, b, c, q: None }
    }

    pub fn q_quadratic(a: S, b: S, c: Option<S>, q: QParams<S>) -> Self {
        AbcdArgs { flavor: Flavor::QQuadratic, a, b, c, q: Some(q) }
    }

    pub fn q_linear(a: S, b: S, c: Option<S>, q: QParams<S>) -> Self {
        AbcdArgs { flavor: Flavor::QLinear, a, b, c, q: Some(q) }
    }

    fn c(&self) -> Result<&S> {
        let c = self.c.as_ref().ok_or_else(|| Error::MissingParameter("c".into()))?;
        if self.flavor != Flavor::Classical && c.is_zero() {
            return Err(Error::InvalidArgument("c must be nonzero".into()));
        }
        Ok(c)
    }

    // The q flavours divide by b and c inside every summand.
    fn check_b(&self) -> Result<()> {
        if self.flavor != Flavor::Classical && self.b.is_zero() {
            return Err(Error::InvalidArgument("b must be nonzero".into()));
        }
        Ok(())
    }

    fn base(&self) -> &QParams<S> {
        self.q.as_ref().expect("q flavors carry a base")
    }

    fn half(&self) -> S {
        self.a.constant_like(1, 2)
    }
}

// Summation helpers for the q flavours. Each summand has the shape
// num / den or num / den^2; a vanishing den is reported before anything is
// added up.

struct QSum<S> {
    nums: Vec<S>,
    dens: Vec<S>,
}

impl<S: Scalar> QSum<S> {
    fn build(len: usize, mut f: impl FnMut(usize) -> (S, S)) -> Self {
        let (nums, dens) = (1..=len).map(&mut f).unzip();
        QSum { nums, dens }
    }

    fn check(&self, label: &str) -> Result<()> {
        match self.dens.iter().position(|d| d.is_zero()) {
            Some(i) => Err(Error::Pole { factor: label.to_string(), index: i + 1 }),
            None => Ok(()),
        }
    }

    fn linear(&self, zero: &S) -> Result<S> {
        let mut acc = zero.clone();
        for (n, d) in self.nums.iter().zip(&self.dens) {
            acc = acc + n.checked_div(d)?;
        }
        Ok(acc)
    }

    fn squared(&self, zero: &S) -> Result<S> {
        let mut acc = zero.clone();
        for (n, d) in self.nums.iter().zip(&self.dens) {
            acc = acc + n.checked_div(&d.square())?;
        }
        Ok(acc)
    }
}

fn pows<S: Scalar>(q: &QParams<S>, m: i64) -> S {
    q.power(m)
}

/// `A_k(a, b)`.
pub fn coeff_a<S: Scalar>(args: &AbcdArgs<S>, k: usize) -> Result<S> {
    args.check_b()?;
    let (a, b) = (&args.a, &args.b);
    let one = a.one_like();
    let zero = a.zero_like();
    match args.flavor {
        Flavor::Classical => {
            let h = args.half();
            let x1 = b.clone() - &one;
            let x2 = -b.clone();
            let x3 = (a.clone() - b) * &h;
            let x4 = (a.clone() + b - &one) * &h;
            for x in [&x1, &x2, &x3, &x4] {
                check_poles(k, x, "A_k")?;
            }
            Ok(harmonic(k, &x1)? - harmonic(k, &x2)? + h.clone() * harmonic(k, &x3)?
                - h * harmonic(k, &x4)?)
        }
        Flavor::QQuadratic => {
            let q = args.base();
            let b2 = b.square();
            let s1 = QSum::build(k, |i| {
                let t = pows(q, i as i64 - 1);
                (-t.clone(), one.clone() - b.clone() * &t)
            });
            let s2 = QSum::build(k, |i| {
                let t = pows(q, i as i64);
                (t.checked_div(&b2).unwrap(), one.clone() - t.checked_div(b).unwrap())
            });
            let s3 = QSum::build(k, |i| {
                let t = a.clone() * pows(q, 2 * i as i64);
                (t.checked_div(&b2).unwrap(), one.clone() - t.checked_div(b).unwrap())
            });
            let s4 = QSum::build(k, |i| {
                let t = a.clone() * pows(q, 2 * i as i64 - 1);
                (-t.clone(), one.clone() - t * b)
            });
            for (s, l) in [(&s1, "A_k term 1"), (&s2, "A_k term 2"), (&s3, "A_k term 3"), (&s4, "A_k term 4")] {
                s.check(l)?;
            }
            Ok(s1.linear(&zero)? + s2.linear(&zero)? - s3.linear(&zero)? - s4.linear(&zero)?)
        }
        Flavor::QLinear => {
            let q = args.base();
            let b2 = b.square();
            let s1 = QSum::build(k, |i| {
                let t = pows(q, i as i64 - 1);
                (-t.clone(), one.clone() - b.clone() * &t)
            });
            let s2 = QSum::build(k, |i| {
                let t = pows(q, i as i64);
                (t.checked_div(&b2).unwrap(), one.clone() - t.checked_div(b).unwrap())
            });
            let s3 = QSum::build(k, |i| {
                let t = a.clone() * pows(q, i as i64);
                (t.checked_div(&b2).unwrap(), one.clone() - t.checked_div(b).unwrap())
            });
            let s4 = QSum::build(k, |i| {
                let t = a.clone() * pows(q, i as i64 - 1);
                (t.clone(), one.clone() - t * b)
            });
            for (s, l) in [(&s1, "A_k term 1"), (&s2, "A_k term 2"), (&s3, "A_k term 3"), (&s4, "A_k term 4")] {
                s.check(l)?;
            }
            Ok(s1.linear(&zero)? + s2.linear(&zero)? - s3.linear(&zero)? + s4.linear(&zero)?)
        }
    }
}

/// `B_n(a, b, c)`.
pub fn coeff_b<S: Scalar>(args: &AbcdArgs<S>, n: usize) -> Result<S> {
    args.check_b()?;
    let (a, b) = (&args.a, &args.b);
    let c = args.c()?;
    let one = a.one_like();
    let zero = a.zero_like();
    match args.flavor {
        Flavor::Classical => {
            let h = args.half();
            let x1 = (a.clone() + b - &one) * &h - c;
            let x2 = (a.clone() - b) * &h - c;
            let x3 = (a.clone() + b - &one) * &h;
            let x4 = (a.clone() - b) * &h;
            for x in [&x1, &x2, &x3, &x4] {
                check_poles(n, x, "B_n")?;
            }
            Ok(h.clone() * harmonic(n, &x1)? - h.clone() * harmonic(n, &x2)?
                - h.clone() * harmonic(n, &x3)?
                + h * harmonic(n, &x4)?)
        }
        Flavor::QQuadratic => {
            let q = args.base();
            let b2 = b.square();
            let c2 = c.square();
            let s1 = QSum::build(n, |i| {
                let t = a.clone() * pows(q, 2 * i as i64);
                (
                    t.checked_div(&(b2.clone() * &c2)).unwrap(),
                    one.clone() - t.checked_div(&(b.clone() * &c2)).unwrap(),
                )
            });
            let s2 = QSum::build(n, |i| {
                let t = a.clone() * pows(q, 2 * i as i64 - 1);
                (-t.checked_div(&c2).unwrap(), one.clone() - (t * b).checked_div(&c2).unwrap())
            });
            let s3 = QSum::build(n, |i| {
                let t = a.clone() * pows(q, 2 * i as i64);
                (t.checked_div(&b2).unwrap(), one.clone() - t.checked_div(b).unwrap())
            });
            let s4 = QSum::build(n, |i| {
                let t = a.clone() * pows(q, 2 * i as i64 - 1);
                (-t.clone(), one.clone() - t * b)
            });
            for (s, l) in [(&s1, "B_n term 1"), (&s2, "B_n term 2"), (&s3, "B_n term 3"), (&s4, "B_n term 4")] {
                s.check(l)?;
            }
            Ok(s1.linear(&zero)? + s2.linear(&zero)? - s3.linear(&zero)? - s4.linear(&zero)?)
        }
        Flavor::QLinear => {
            let q = args.base();
            let b2 = b.square();
            let s1 = QSum::build(n, |i| {
                let t = a.clone() * pows(q, i as i64);
                (
                    t.checked_div(&(b2.clone() * c)).unwrap(),
                    one.clone() - t.checked_div(&(b.clone() * c)).unwrap(),
                )
            });
            let s2 = QSum::build(n, |i| {
                let t = a.clone() * pows(q, i as i64 - 1);
                (-t.checked_div(c).unwrap(), one.clone() - (t * b).checked_div(c).unwrap())
            });
            let s3 = QSum::build(n, |i| {
                let t = a.clone() * pows(q, i as i64);
                (t.checked_div(&b2).unwrap(), one.clone() - t.checked_div(b).unwrap())
            });
            let s4 = QSum::build(n, |i| {
                let t = a.clone() * pows(q, i as i64 - 1);
                (t.clone(), one.clone() - t * b)
            });
            for (s, l) in [(&s1, "B_n term 1"), (&s2, "B_n term 2"), (&s3, "B_n term 3"), (&s4, "B_n term 4")] {
                s.check(l)?;
            }
            Ok(s1.linear(&zero)? + s2.linear(&zero)? - s3.linear(&zero)? + s4.linear(&zero)?)
        }
    }
}

/// `C_k(a, b)`.
pub fn coeff_c<S: Scalar>(args: &AbcdArgs<S>, k: usize) -> Result<S> {
    args.check_b()?;
    let (a, b) = (&args.a, &args.b);
    let one = a.one_like();
    let two = a.int_like(2);
    let zero = a.zero_like();
    match args.flavor {
        Flavor::Classical => {
            let h = args.half();
            let quarter = a.constant_like(1, 4);
            let x1 = b.clone() - &one;
            let x2 = -b.clone();
            let x3 = (a.clone() - b) * &h;
            let x4 = (a.clone() + b - &one) * &h;
            for x in [&x1, &x2, &x3, &x4] {
                check_poles(k, x, "C_k")?;
            }
            Ok(-harmonic_m(k, 2, &x1)? - harmonic_m(k, 2, &x2)?
                + quarter.clone() * harmonic_m(k, 2, &x3)?
                + quarter * harmonic_m(k, 2, &x4)?)
        }
        Flavor::QQuadratic | Flavor::QLinear => {
            let q = args.base();
            let quad = args.flavor == Flavor::QQuadratic;
            let b3 = b.square() * b;
            // exponents of q in the third and fourth sums
            let e3 = |i: usize| if quad { 2 * i as i64 } else { i as i64 };
            let e4 = |i: usize| if quad { 2 * i as i64 - 1 } else { i as i64 - 1 };
            let s1 = QSum::build(k, |i| {
                let t = pows(q, i as i64 - 1);
                (-t.square(), one.clone() - b.clone() * &t)
            });
            let s2 = QSum::build(k, |i| {
                let u = pows(q, i as i64).checked_div(b).unwrap();
                let num = (u.clone() - &two) * pows(q, i as i64).checked_div(&b3).unwrap();
                (num, one.clone() - u)
            });
            let s3 = QSum::build(k, |i| {
                let t = a.clone() * pows(q, e3(i));
                let u = t.checked_div(b).unwrap();
                ((u.clone() - &two) * t.checked_div(&b3).unwrap(), one.clone() - u)
            });
            let s4 = QSum::build(k, |i| {
                let t = a.clone() * pows(q, e4(i));
                (t.square(), one.clone() - t * b)
            });
            for (s, l) in [(&s1, "C_k term 1"), (&s2, "C_k term 2"), (&s3, "C_k term 3"), (&s4, "C_k term 4")] {
                s.check(l)?;
            }
            Ok(s1.squared(&zero)? + s2.squared(&zero)? - s3.squared(&zero)? + s4.squared(&zero)?)
        }
    }
}

/// `D_n(a, b, c)`.
pub fn coeff_d<S: Scalar>(args: &AbcdArgs<S>, n: usize) -> Result<S> {
    args.check_b()?;
    let (a, b) = (&args.a, &args.b);
    let c = args.c()?;
    let one = a.one_like();
    let two = a.int_like(2);
    let zero = a.zero_like();
    match args.flavor {
        Flavor::Classical => {
            let h = args.half();
            let quarter = a.constant_like(1, 4);
            let x1 = (a.clone() + b - &one) * &h - c;
            let x2 = (a.clone() - b) * &h - c;
            let x3 = (a.clone() + b - &one) * &h;
            let x4 = (a.clone() - b) * &h;
            for x in [&x1, &x2, &x3, &x4] {
                check_poles(n, x, "D_n")?;
            }
            Ok(-quarter.clone() * harmonic_m(n, 2, &x1)? - quarter.clone() * harmonic_m(n, 2, &x2)?
                + quarter.clone() * harmonic_m(n, 2, &x3)?
                + quarter * harmonic_m(n, 2, &x4)?)
        }
        Flavor::QQuadratic | Flavor::QLinear => {
            let q = args.base();
            let quad = args.flavor == Flavor::QQuadratic;
            let b3 = b.square() * b;
            // the quadratic flavour pairs c^2 where the linear one has c
            let cc = if quad { c.square() } else { c.clone() };
            let e1 = |i: usize| if quad { 2 * i as i64 } else { i as i64 };
            let e2 = |i: usize| if quad { 2 * i as i64 - 1 } else { i as i64 - 1 };
            let s1 = QSum::build(n, |i| {
                let t = a.clone() * pows(q, e1(i));
                let u = t.checked_div(&(b.clone() * &cc)).unwrap();
                ((u.clone() - &two) * t.checked_div(&(b3.clone() * &cc)).unwrap(), one.clone() - u)
            });
            let s2 = QSum::build(n, |i| {
                let t = a.clone() * pows(q, e2(i));
                let num = t.square().checked_div(&cc.square()).unwrap();
                (num, one.clone() - (t * b).checked_div(&cc).unwrap())
            });
            let s3 = QSum::build(n, |i| {
                let t = a.clone() * pows(q, e1(i));
                let u = t.checked_div(b).unwrap();
                ((u.clone() - &two) * t.checked_div(&b3).unwrap(), one.clone() - u)
            });
            let s4 = QSum::build(n, |i| {
                let t = a.clone() * pows(q, e2(i));
                (t.square(), one.clone() - t * b)
            });
            for (s, l) in [(&s1, "D_n term 1"), (&s2, "D_n term 2"), (&s3, "D_n term 3"), (&s4, "D_n term 4")] {
                s.check(l)?;
            }
            Ok(s1.squared(&zero)? - s2.squared(&zero)? - s3.squared(&zero)? + s4.squared(&zero)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Exact;

    fn ex(n: i64, d: i64) -> Exact {
        Exact::from_ratio(n, d)
    }

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic(0, &ex(3, 7)).unwrap(), ex(0, 1));
        assert_eq!(harmonic(2, &ex(0, 1)).unwrap(), ex(3, 2));
        assert_eq!(harmonic_m(2, 2, &ex(0, 1)).unwrap(), ex(5, 4));
    }

    #[test]
    fn pole_is_detected_before_summing() {
        let err = harmonic(5, &ex(-3, 1)).unwrap_err();
        assert_eq!(err, Error::Pole { factor: "harmonic number: x + i".into(), index: 3 });
    }

    #[test]
    fn missing_parameters() {
        let args = AbcdArgs::classical(ex(1, 3), ex(1, 5), None);
        assert_eq!(coeff_b(&args, 3), Err(Error::MissingParameter("c".into())));
        assert!(AbcdArgs::new(Flavor::QLinear, ex(1, 3), ex(1, 5), None, None).is_err());
    }

    #[test]
    fn classical_c_matches_independent_sum() {
        let (a, b) = (ex(3, 10), ex(7, 10));
        let args = AbcdArgs::classical(a.clone(), b.clone(), None);
        let mut want = ex(0, 1);
        for i in 1..=3i64 {
            let i = Exact::from_int(i);
            let t1 = (b.clone() - ex(1, 1) + &i).powi(-2).unwrap();
            let t2 = (-b.clone() + &i).powi(-2).unwrap();
            let t3 = ((a.clone() - &b) * ex(1, 2) + &i).powi(-2).unwrap();
            let t4 = ((a.clone() + &b - ex(1, 1)) * ex(1, 2) + &i).powi(-2).unwrap();
            want = want - t1 - t2 + ex(1, 4) * t3 + ex(1, 4) * t4;
        }
        assert_eq!(coeff_c(&args, 3).unwrap(), want);
    }

    #[test]
    fn special_points_vanish() {
        let classical = AbcdArgs::classical(ex(-1, 2), ex(1, 2), Some(ex(-1, 2)));
        // q = 1/4, so q^(1/2) = 1/2
        let q = QParams::new(ex(1, 4)).unwrap();
        let quad = AbcdArgs::q_quadratic(ex(2, 1), ex(1, 2), Some(ex(2, 1)), q.clone());
        let lin = AbcdArgs::q_linear(ex(1, 2), ex(1, 2), Some(ex(5, 3)), q);
        for k in 0..=6 {
            for args in [&classical, &quad, &lin] {
                assert!(coeff_a(args, k).unwrap().is_zero(), "{:?} A_{k}", args.flavor);
                assert!(coeff_b(args, k).unwrap().is_zero(), "{:?} B_{k}", args.flavor);
            }
        }
    }
}

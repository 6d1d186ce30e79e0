//! Terminating summation formulas and their once- and twice-differentiated
//! forms. Every evaluator is generic over [`Scalar`], so the same code runs
//! in exact rationals, in binary floating point, and on jets.

use crate::error::{Error, Result};
use crate::harmonics::{coeff_a, coeff_b, coeff_c, coeff_d, AbcdArgs};
use crate::numerics::Scalar;
use crate::qkernel::{pochhammer, q_pochhammer, QParams};

/// Left and right sides of an identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Sides<S> {
    pub lhs: S,
    pub rhs: S,
}

/// A ratio of Pochhammer-type products; each denominator factor carries a
/// label so that a pole can be reported by name.
struct Ratio<S> {
    num: S,
    den: S,
}

impl<S: Scalar> Ratio<S> {
    fn new(one: &S) -> Self {
        Ratio { num: one.clone(), den: one.clone() }
    }

    fn up(mut self, x: S) -> Self {
        self.num = self.num * x;
        self
    }

    fn down(mut self, x: S, label: &str, index: usize) -> Result<Self> {
        if x.is_zero() {
            return Err(Error::Pole { factor: label.to_string(), index });
        }
        self.den = self.den * x;
        Ok(self)
    }

    fn value(self) -> Result<S> {
        self.num.checked_div(&self.den)
    }
}

fn int<S: Scalar>(like: &S, n: i64) -> S {
    like.int_like(n)
}

fn half<S: Scalar>(like: &S) -> S {
    like.constant_like(1, 2)
}

// --- the terminating 7F6 --------------------------------------------------

/// The `k`-th summand of the terminating very-well-poised 7F6 with
/// parameters `a, 1 + a/3, b, 1 - b, c, 1/2 + a - c + n, -n`.
pub fn term_7f6<S: Scalar>(a: &S, b: &S, c: &S, n: usize, k: usize) -> Result<S> {
    let one = a.one_like();
    let h = half(a);
    let third = a.constant_like(1, 3);
    let nn = int(a, n as i64);
    let r = Ratio::new(&one)
        .up(pochhammer(a, k))
        .up(pochhammer(&(one.clone() + a.clone() * &third), k))
        .up(pochhammer(b, k))
        .up(pochhammer(&(one.clone() - b), k))
        .up(pochhammer(c, k))
        .up(pochhammer(&(h.clone() + a - c + &nn), k))
        .up(pochhammer(&(-nn.clone()), k))
        .down(pochhammer(&one, k), "(1)_k", k)?
        .down(pochhammer(&(a.clone() * &third), k), "(a/3)_k", k)?
        .down(pochhammer(&((int(a, 2) + a - b) * &h), k), "((2+a-b)/2)_k", k)?
        .down(pochhammer(&((one.clone() + a + b) * &h), k), "((1+a+b)/2)_k", k)?
        .down(pochhammer(&(one.clone() + a + &(int(a, 2) * &nn)), k), "(1+a+2n)_k", k)?
        .down(pochhammer(&(one.clone() + a - &(int(a, 2) * c)), k), "(1+a-2c)_k", k)?
        .down(pochhammer(&(int(a, 2) * c - a - &(int(a, 2) * &nn)), k), "(2c-a-2n)_k", k)?;
    r.value()
}

pub fn eval_7f6_lhs<S: Scalar>(a: &S, b: &S, c: &S, n: usize) -> Result<S> {
    let mut acc = a.zero_like();
    for k in 0..=n {
        acc = acc + term_7f6(a, b, c, n, k)?;
    }
    Ok(acc)
}

pub fn eval_7f6_rhs<S: Scalar>(a: &S, b: &S, c: &S, n: usize) -> Result<S> {
    let one = a.one_like();
    let h = half(a);
    let apb = (one.clone() + a + b) * &h;
    let amb = one.clone() + &((a.clone() - b) * &h);
    let ap = (one.clone() + a) * &h;
    let a2 = one.clone() + &(a.clone() * &h);
    Ratio::new(&one)
        .up(pochhammer(&ap, n))
        .up(pochhammer(&a2, n))
        .up(pochhammer(&(apb.clone() - c), n))
        .up(pochhammer(&(amb.clone() - c), n))
        .down(pochhammer(&apb, n), "((1+a+b)/2)_n", n)?
        .down(pochhammer(&amb, n), "(1+(a-b)/2)_n", n)?
        .down(pochhammer(&(ap - c), n), "((1+a)/2-c)_n", n)?
        .down(pochhammer(&(a2 - c), n), "(1+a/2-c)_n", n)?
        .value()
}

pub fn eval_7f6<S: Scalar>(a: &S, b: &S, c: &S, n: usize) -> Result<Sides<S>> {
    Ok(Sides { lhs: eval_7f6_lhs(a, b, c, n)?, rhs: eval_7f6_rhs(a, b, c, n)? })
}

/// First `b`-derivative of the 7F6 summation, divided through by nothing:
/// `sum_{k>=1} t_k A_k = R_n B_n`.
pub fn eval_eq32<S: Scalar>(a: &S, b: &S, c: &S, n: usize) -> Result<Sides<S>> {
    let args = AbcdArgs::classical(a.clone(), b.clone(), Some(c.clone()));
    let mut lhs = a.zero_like();
    for k in 1..=n {
        lhs = lhs + term_7f6(a, b, c, n, k)? * coeff_a(&args, k)?;
    }
    let rhs = eval_7f6_rhs(a, b, c, n)? * coeff_b(&args, n)?;
    Ok(Sides { lhs, rhs })
}

/// Second `b`-derivative: weights `A_k^2 + C_k` and `B_n^2 + D_n`.
pub fn eval_eq33<S: Scalar>(a: &S, b: &S, c: &S, n: usize) -> Result<Sides<S>> {
    let args = AbcdArgs::classical(a.clone(), b.clone(), Some(c.clone()));
    let mut lhs = a.zero_like();
    for k in 1..=n {
        let w = coeff_a(&args, k)?.square() + coeff_c(&args, k)?;
        lhs = lhs + term_7f6(a, b, c, n, k)? * w;
    }
    let bn = coeff_b(&args, n)?;
    let rhs = eval_7f6_rhs(a, b, c, n)? * (bn.square() + coeff_d(&args, n)?);
    Ok(Sides { lhs, rhs })
}

// --- truncated quadratic summation -------------------------------------------

/// The `k`-th summand of the quadratic summation after `d -> q^-2n`,
/// `f -> c^2`.
pub fn term_quadratic<S: Scalar>(a: &S, b: &S, c: &S, n: usize, q: &QParams<S>, k: usize) -> Result<S> {
    let one = a.one_like();
    if b.is_zero() || c.is_zero() {
        return Err(Error::InvalidArgument("b and c must be nonzero".into()));
    }
    let q2 = q.power_base(2);
    let c2 = c.square();
    let nn = n as i64;
    let qq = q.q().clone();
    let r = Ratio::new(&one)
        .up(one.clone() - a.clone() * q.power(3 * k as i64))
        .up(q_pochhammer(a, q, k))
        .up(q_pochhammer(b, q, k))
        .up(q_pochhammer(&qq.checked_div(b)?, q, k))
        .up(q_pochhammer(&q.power(-2 * nn), &q2, k))
        .up(q_pochhammer(&c2, &q2, k))
        .up(q_pochhammer(&(a.square() * q.power(2 * nn + 1)).checked_div(&c2)?, &q2, k))
        .up(q.power(k as i64))
        .down(one.clone() - a, "1-a", 0)?
        .down(q_pochhammer(q2.q(), &q2, k), "(q^2;q^2)_k", k)?
        .down(q_pochhammer(&(a.clone() * q.power(2)).checked_div(b)?, &q2, k), "(aq^2/b;q^2)_k", k)?
        .down(q_pochhammer(&(a.clone() * b * &qq), &q2, k), "(abq;q^2)_k", k)?
        .down(q_pochhammer(&(a.clone() * q.power(2 * nn + 1)), q, k), "(aq^(2n+1);q)_k", k)?
        .down(q_pochhammer(&(a.clone() * &qq).checked_div(&c2)?, q, k), "(aq/c^2;q)_k", k)?
        .down(q_pochhammer(&(c2.clone() * q.power(-2 * nn)).checked_div(a)?, q, k), "(c^2q^-2n/a;q)_k", k)?;
    r.value()
}

pub fn rhs_quadratic<S: Scalar>(a: &S, b: &S, c: &S, n: usize, q: &QParams<S>) -> Result<S> {
    let one = a.one_like();
    if b.is_zero() || c.is_zero() {
        return Err(Error::InvalidArgument("b and c must be nonzero".into()));
    }
    let q2 = q.power_base(2);
    let c2 = c.square();
    let qq = q.q().clone();
    let aq2 = a.clone() * q.power(2);
    Ratio::new(&one)
        .up(q_pochhammer(&(a.clone() * &qq), &q2, n))
        .up(q_pochhammer(&aq2, &q2, n))
        .up(q_pochhammer(&aq2.checked_div(&(b.clone() * &c2))?, &q2, n))
        .up(q_pochhammer(&(a.clone() * b * &qq).checked_div(&c2)?, &q2, n))
        .down(q_pochhammer(&(a.clone() * &qq).checked_div(&c2)?, &q2, n), "(aq/c^2;q^2)_n", n)?
        .down(q_pochhammer(&aq2.checked_div(&c2)?, &q2, n), "(aq^2/c^2;q^2)_n", n)?
        .down(q_pochhammer(&aq2.checked_div(b)?, &q2, n), "(aq^2/b;q^2)_n", n)?
        .down(q_pochhammer(&(a.clone() * b * &qq), &q2, n), "(abq;q^2)_n", n)?
        .value()
}

pub fn eval_quadratic_truncated<S: Scalar>(a: &S, b: &S, c: &S, n: usize, q: &QParams<S>) -> Result<Sides<S>> {
    let mut lhs = a.zero_like();
    for k in 0..=n {
        lhs = lhs + term_quadratic(a, b, c, n, q, k)?;
    }
    Ok(Sides { lhs, rhs: rhs_quadratic(a, b, c, n, q)? })
}

/// Twice-differentiated truncated quadratic summation.
pub fn eval_eq42<S: Scalar>(a: &S, b: &S, c: &S, n: usize, q: &QParams<S>) -> Result<Sides<S>> {
    let args = AbcdArgs::q_quadratic(a.clone(), b.clone(), Some(c.clone()), q.clone());
    let mut lhs = a.zero_like();
    for k in 1..=n {
        let w = coeff_a(&args, k)?.square() + coeff_c(&args, k)?;
        lhs = lhs + term_quadratic(a, b, c, n, q, k)? * w;
    }
    let bn = coeff_b(&args, n)?;
    let rhs = rhs_quadratic(a, b, c, n, q)? * (bn.square() + coeff_d(&args, n)?);
    Ok(Sides { lhs, rhs })
}

// --- Jackson's 8phi7 and its specialisation ------------------------------------

/// The `k`-th summand of the terminating very-well-poised 8phi7, with the
/// pair `(q a^(1/2), -q a^(1/2))_k / (a^(1/2), -a^(1/2))_k` written as
/// `(1 - a q^2k) / (1 - a)` so that no square root of `a` is needed.
pub fn term_jackson<S: Scalar>(a: &S, b: &S, c: &S, d: &S, e: &S, n: usize, q: &QParams<S>, k: usize) -> Result<S> {
    let one = a.one_like();
    let aq = a.clone() * q.q();
    for (x, name) in [(b, "b"), (c, "c"), (d, "d"), (e, "e")] {
        if x.is_zero() {
            return Err(Error::InvalidArgument(format!("{name} must be nonzero")));
        }
    }
    Ratio::new(&one)
        .up(one.clone() - a.clone() * q.power(2 * k as i64))
        .up(q_pochhammer(a, q, k))
        .up(q_pochhammer(b, q, k))
        .up(q_pochhammer(c, q, k))
        .up(q_pochhammer(d, q, k))
        .up(q_pochhammer(e, q, k))
        .up(q_pochhammer(&q.power(-(n as i64)), q, k))
        .up(q.power(k as i64))
        .down(one.clone() - a, "1-a", 0)?
        .down(q_pochhammer(q.q(), q, k), "(q;q)_k", k)?
        .down(q_pochhammer(&aq.checked_div(b)?, q, k), "(aq/b;q)_k", k)?
        .down(q_pochhammer(&aq.checked_div(c)?, q, k), "(aq/c;q)_k", k)?
        .down(q_pochhammer(&aq.checked_div(d)?, q, k), "(aq/d;q)_k", k)?
        .down(q_pochhammer(&aq.checked_div(e)?, q, k), "(aq/e;q)_k", k)?
        .down(q_pochhammer(&(a.clone() * q.power(n as i64 + 1)), q, k), "(aq^(n+1);q)_k", k)?
        .value()
}

/// Both sides of the 8phi7 summation; the balance `q^(n+1) a^2 = bcde` is
/// checked first.
pub fn eval_jackson<S: Scalar>(a: &S, b: &S, c: &S, d: &S, e: &S, n: usize, q: &QParams<S>) -> Result<Sides<S>> {
    let lhs_bal = q.power(n as i64 + 1) * a.square();
    let rhs_bal = b.clone() * c * d * e;
    if !lhs_bal.approx_eq(&rhs_bal) {
        return Err(Error::BalanceViolation(format!(
            "q^(n+1) a^2 = {lhs_bal:?} but bcde = {rhs_bal:?}"
        )));
    }
    let mut lhs = a.zero_like();
    for k in 0..=n {
        lhs = lhs + term_jackson(a, b, c, d, e, n, q, k)?;
    }
    let one = a.one_like();
    let aq = a.clone() * q.q();
    let rhs = Ratio::new(&one)
        .up(q_pochhammer(&aq, q, n))
        .up(q_pochhammer(&aq.checked_div(&(b.clone() * c))?, q, n))
        .up(q_pochhammer(&aq.checked_div(&(b.clone() * d))?, q, n))
        .up(q_pochhammer(&aq.checked_div(&(c.clone() * d))?, q, n))
        .down(q_pochhammer(&aq.checked_div(b)?, q, n), "(aq/b;q)_n", n)?
        .down(q_pochhammer(&aq.checked_div(c)?, q, n), "(aq/c;q)_n", n)?
        .down(q_pochhammer(&aq.checked_div(d)?, q, n), "(aq/d;q)_n", n)?
        .down(q_pochhammer(&aq.checked_div(&(b.clone() * c * d))?, q, n), "(aq/bcd;q)_n", n)?
        .value()?;
    Ok(Sides { lhs, rhs })
}

/// The value of `e` that balances the 8phi7: `e = q^(n+1) a^2 / (bcd)`.
pub fn jackson_balanced_e<S: Scalar>(a: &S, b: &S, c: &S, d: &S, n: usize, q: &QParams<S>) -> Result<S> {
    (q.power(n as i64 + 1) * a.square()).checked_div(&(b.clone() * c * d))
}

/// The `k`-th summand of the 8phi7 after `d -> q/b`, `e -> a^2 q^n / c`.
pub fn term_lemma51<S: Scalar>(a: &S, b: &S, c: &S, n: usize, q: &QParams<S>, k: usize) -> Result<S> {
    let one = a.one_like();
    if b.is_zero() || c.is_zero() || a.is_zero() {
        return Err(Error::InvalidArgument("a, b and c must be nonzero".into()));
    }
    let qq = q.q().clone();
    let nn = n as i64;
    let aq = a.clone() * &qq;
    Ratio::new(&one)
        .up(one.clone() - a.clone() * q.power(2 * k as i64))
        .up(q_pochhammer(a, q, k))
        .up(q_pochhammer(b, q, k))
        .up(q_pochhammer(c, q, k))
        .up(q_pochhammer(&qq.checked_div(b)?, q, k))
        .up(q_pochhammer(&(a.square() * q.power(nn)).checked_div(c)?, q, k))
        .up(q_pochhammer(&q.power(-nn), q, k))
        .up(q.power(k as i64))
        .down(one.clone() - a, "1-a", 0)?
        .down(q_pochhammer(&qq, q, k), "(q;q)_k", k)?
        .down(q_pochhammer(&aq.checked_div(b)?, q, k), "(aq/b;q)_k", k)?
        .down(q_pochhammer(&aq.checked_div(c)?, q, k), "(aq/c;q)_k", k)?
        .down(q_pochhammer(&(a.clone() * b), q, k), "(ab;q)_k", k)?
        .down(q_pochhammer(&(c.clone() * q.power(1 - nn)).checked_div(a)?, q, k), "(cq^(1-n)/a;q)_k", k)?
        .down(q_pochhammer(&(a.clone() * q.power(nn + 1)), q, k), "(aq^(n+1);q)_k", k)?
        .value()
}

pub fn rhs_lemma51<S: Scalar>(a: &S, b: &S, c: &S, n: usize, q: &QParams<S>) -> Result<S> {
    let one = a.one_like();
    if b.is_zero() || c.is_zero() {
        return Err(Error::InvalidArgument("b and c must be nonzero".into()));
    }
    let aq = a.clone() * q.q();
    Ratio::new(&one)
        .up(q_pochhammer(&aq, q, n))
        .up(q_pochhammer(&aq.checked_div(&(b.clone() * c))?, q, n))
        .up(q_pochhammer(a, q, n))
        .up(q_pochhammer(&(a.clone() * b).checked_div(c)?, q, n))
        .down(q_pochhammer(&aq.checked_div(b)?, q, n), "(aq/b;q)_n", n)?
        .down(q_pochhammer(&aq.checked_div(c)?, q, n), "(aq/c;q)_n", n)?
        .down(q_pochhammer(&(a.clone() * b), q, n), "(ab;q)_n", n)?
        .down(q_pochhammer(&a.checked_div(c)?, q, n), "(a/c;q)_n", n)?
        .value()
}

/// The specialised 8phi7 before differentiation.
pub fn eval_lemma51_base<S: Scalar>(a: &S, b: &S, c: &S, n: usize, q: &QParams<S>) -> Result<Sides<S>> {
    let mut lhs = a.zero_like();
    for k in 0..=n {
        lhs = lhs + term_lemma51(a, b, c, n, q, k)?;
    }
    Ok(Sides { lhs, rhs: rhs_lemma51(a, b, c, n, q)? })
}

/// Twice-differentiated specialised 8phi7 with the base-q coefficient sums.
pub fn eval_lemma51<S: Scalar>(a: &S, b: &S, c: &S, n: usize, q: &QParams<S>) -> Result<Sides<S>> {
    let args = AbcdArgs::q_linear(a.clone(), b.clone(), Some(c.clone()), q.clone());
    let mut lhs = a.zero_like();
    for k in 1..=n {
        let w = coeff_a(&args, k)?.square() + coeff_c(&args, k)?;
        lhs = lhs + term_lemma51(a, b, c, n, q, k)? * w;
    }
    let bn = coeff_b(&args, n)?;
    let rhs = rhs_lemma51(a, b, c, n, q)? * (bn.square() + coeff_d(&args, n)?);
    Ok(Sides { lhs, rhs })
}

// --- Dougall's 7F6 -------------------------------------------------------------

/// The `e` that satisfies the 2-balance `1 + 2a + n = b + c + d + e`.
pub fn dougall_balanced_e<S: Scalar>(a: &S, b: &S, c: &S, d: &S, n: usize) -> S {
    a.one_like() + a.int_like(2) * a - b - c - d + &a.int_like(n as i64)
}

pub fn term_dougall<S: Scalar>(a: &S, b: &S, c: &S, d: &S, e: &S, n: usize, k: usize) -> Result<S> {
    let one = a.one_like();
    let h = half(a);
    let opa = one.clone() + a;
    Ratio::new(&one)
        .up(pochhammer(a, k))
        .up(pochhammer(&(one.clone() + a.clone() * &h), k))
        .up(pochhammer(b, k))
        .up(pochhammer(c, k))
        .up(pochhammer(d, k))
        .up(pochhammer(e, k))
        .up(pochhammer(&(-a.int_like(n as i64)), k))
        .down(pochhammer(&one, k), "(1)_k", k)?
        .down(pochhammer(&(a.clone() * &h), k), "(a/2)_k", k)?
        .down(pochhammer(&(opa.clone() - b), k), "(1+a-b)_k", k)?
        .down(pochhammer(&(opa.clone() - c), k), "(1+a-c)_k", k)?
        .down(pochhammer(&(opa.clone() - d), k), "(1+a-d)_k", k)?
        .down(pochhammer(&(opa.clone() - e), k), "(1+a-e)_k", k)?
        .down(pochhammer(&(opa + &a.int_like(n as i64)), k), "(1+a+n)_k", k)?
        .value()
}

/// Both sides of Dougall's terminating 7F6. The classical statement needs
/// `1 + 2a + n = b + c + d + e`; that is checked first.
pub fn eval_dougall<S: Scalar>(a: &S, b: &S, c: &S, d: &S, e: &S, n: usize) -> Result<Sides<S>> {
    let want = dougall_balanced_e(a, b, c, d, n);
    if !want.approx_eq(e) {
        return Err(Error::BalanceViolation(format!("need e = 1 + 2a + n - b - c - d = {want:?}, got {e:?}")));
    }
    let mut lhs = a.zero_like();
    for k in 0..=n {
        lhs = lhs + term_dougall(a, b, c, d, e, n, k)?;
    }
    let one = a.one_like();
    let opa = one.clone() + a;
    let rhs = Ratio::new(&one)
        .up(pochhammer(&opa, n))
        .up(pochhammer(&(opa.clone() - b - c), n))
        .up(pochhammer(&(opa.clone() - b - d), n))
        .up(pochhammer(&(opa.clone() - c - d), n))
        .down(pochhammer(&(opa.clone() - b), n), "(1+a-b)_n", n)?
        .down(pochhammer(&(opa.clone() - c), n), "(1+a-c)_n", n)?
        .down(pochhammer(&(opa.clone() - d), n), "(1+a-d)_n", n)?
        .down(pochhammer(&(opa - b - c - d), n), "(1+a-b-c-d)_n", n)?
        .value()?;
    Ok(Sides { lhs, rhs })
}

//! Non-terminating identities: the classical double series for pi and the
//! q-series with infinite-product constants.

use dashu_int::IBig;

use super::{sum_adaptive, Method, SumResult, TailModel, TermStream};
use crate::error::{Error, Result};
use crate::numerics::{pi, BigReal, Scalar};
use crate::qkernel::{q_pochhammer_inf, QParams};

/// Extra bits carried by streams that are summed through extrapolation.
pub const GUARD_BITS: usize = 64;

/// Every non-terminating identity that can be evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InfiniteIdentity {
    Ramanujan,
    Eq11a,
    Eq11b,
    Eq12,
    Eq21,
    Eq23,
    Eq24,
    Eq25,
    Eq26,
    EulerZeta2,
    Eq13,
    Eq22,
    Eq27,
    Eq28,
    Eq29,
    Eq210,
    Eq27Corrected,
    Eq28Corrected,
    Eq29Corrected,
    Eq210Corrected,
    Eq41,
}

use InfiniteIdentity as Id;

impl InfiniteIdentity {
    pub const ALL: [InfiniteIdentity; 21] = [
        Id::Ramanujan,
        Id::Eq11a,
        Id::Eq11b,
        Id::Eq12,
        Id::Eq21,
        Id::Eq23,
        Id::Eq24,
        Id::Eq25,
        Id::Eq26,
        Id::EulerZeta2,
        Id::Eq13,
        Id::Eq22,
        Id::Eq27,
        Id::Eq28,
        Id::Eq29,
        Id::Eq210,
        Id::Eq27Corrected,
        Id::Eq28Corrected,
        Id::Eq29Corrected,
        Id::Eq210Corrected,
        Id::Eq41,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Id::Ramanujan => "ramanujan",
            Id::Eq11a => "eq1.1a",
            Id::Eq11b => "eq1.1b",
            Id::Eq12 => "eq1.2",
            Id::Eq21 => "eq2.1",
            Id::Eq23 => "eq2.3",
            Id::Eq24 => "eq2.4",
            Id::Eq25 => "eq2.5",
            Id::Eq26 => "eq2.6",
            Id::EulerZeta2 => "euler-zeta2",
            Id::Eq13 => "eq1.3",
            Id::Eq22 => "eq2.2",
            Id::Eq27 => "eq2.7",
            Id::Eq28 => "eq2.8",
            Id::Eq29 => "eq2.9",
            Id::Eq210 => "eq2.10",
            Id::Eq27Corrected => "eq2.7-corrected",
            Id::Eq28Corrected => "eq2.8-corrected",
            Id::Eq29Corrected => "eq2.9-corrected",
            Id::Eq210Corrected => "eq2.10-corrected",
            Id::Eq41 => "eq4.1",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|id| id.key() == key)
    }

    pub fn is_q_series(self) -> bool {
        matches!(
            self,
            Id::Eq13
                | Id::Eq22
                | Id::Eq27
                | Id::Eq28
                | Id::Eq29
                | Id::Eq210
                | Id::Eq27Corrected
                | Id::Eq28Corrected
                | Id::Eq29Corrected
                | Id::Eq210Corrected
                | Id::Eq41
        )
    }

    /// Parameters that must be supplied.
    pub fn required_params(self) -> &'static [&'static str] {
        match self {
            Id::Eq41 => &["a", "b", "d", "f", "q"],
            id if id.is_q_series() => &["q"],
            _ => &[],
        }
    }
}

/// Real parameters for the non-terminating identities.
#[derive(Clone, Debug, Default)]
pub struct InfiniteArgs {
    pub q: Option<BigReal>,
    pub a: Option<BigReal>,
    pub b: Option<BigReal>,
    pub d: Option<BigReal>,
    pub f: Option<BigReal>,
}

impl InfiniteArgs {
    pub fn with_q(q: BigReal) -> Self {
        InfiniteArgs { q: Some(q), ..Default::default() }
    }

    fn get(&self, name: &str) -> Result<BigReal> {
        let v = match name {
            "q" => &self.q,
            "a" => &self.a,
            "b" => &self.b,
            "d" => &self.d,
            "f" => &self.f,
            _ => &None,
        };
        v.clone().ok_or_else(|| Error::MissingParameter(name.to_string()))
    }

    fn base(&self, p: usize) -> Result<QParams<BigReal>> {
        QParams::new(self.get("q")?.with_precision(p))
    }
}

/// Both sides of an identity; either side may have failed independently.
#[derive(Debug)]
pub struct SeriesEvaluation {
    pub lhs: Result<SumResult>,
    pub rhs: Result<SumResult>,
}

// --- small helpers ------------------------------------------------------------

/// `prod(num) / prod(den)` rounded once.
fn rat(num: &[i64], den: &[i64], p: usize) -> BigReal {
    let n: IBig = num.iter().map(|&x| IBig::from(x)).product();
    let d: IBig = den.iter().map(|&x| IBig::from(x)).product();
    BigReal::from_ibig(n, p).checked_div(&BigReal::from_ibig(d, p)).expect("nonzero denominator")
}

fn signed(x: BigReal, negative: bool) -> BigReal {
    if negative {
        -x
    } else {
        x
    }
}

/// Cached powers of `q` and q-integers.
struct Powers {
    q: BigReal,
    pos: Vec<BigReal>,
    inv_gap: BigReal,
}

impl Powers {
    fn new(q: &BigReal) -> Self {
        let p = q.precision_bits();
        let one = BigReal::one(p);
        let inv_gap = one.checked_div(&(one.clone() - q)).expect("q < 1");
        Powers { q: q.clone(), pos: vec![one], inv_gap }
    }

    fn get(&mut self, m: i64) -> BigReal {
        if m < 0 {
            return self.q.powi(m).expect("q > 0");
        }
        let m = m as usize;
        while self.pos.len() <= m {
            let next = self.pos.last().expect("nonempty").clone() * &self.q;
            self.pos.push(next);
        }
        self.pos[m].clone()
    }

    /// `[m] = (1 - q^m)/(1 - q)`.
    fn qint(&mut self, m: i64) -> BigReal {
        let p = self.q.precision_bits();
        (BigReal::one(p) - &self.get(m)) * &self.inv_gap
    }

    /// `q^m / [m]^2`.
    fn weight(&mut self, m: i64) -> BigReal {
        let qi = self.qint(m);
        self.get(m).checked_div(&(qi.clone() * &qi)).expect("[m] > 0")
    }
}

/// Running value of `prod (x_j; base_j)_k / prod (y_j; base_j)_k`.
struct Hyper {
    num: Vec<(BigReal, BigReal)>,
    den: Vec<(BigReal, BigReal)>,
    value: BigReal,
    k: usize,
}

impl Hyper {
    fn new(num: Vec<(BigReal, BigReal)>, den: Vec<(BigReal, BigReal)>, p: usize) -> Self {
        Hyper { num, den, value: BigReal::one(p), k: 0 }
    }

    /// Moves from index `k` to `k + 1` and returns the new value.
    fn advance(&mut self) -> Result<BigReal> {
        let p = self.value.precision_bits();
        let one = BigReal::one(p);
        let mut n = one.clone();
        for (x, base) in self.num.iter_mut() {
            n = n * (one.clone() - &*x);
            *x = x.clone() * &*base;
        }
        let mut d = one.clone();
        for (x, base) in self.den.iter_mut() {
            let f = one.clone() - &*x;
            if f.is_zero() {
                return Err(Error::Pole { factor: "lower q-shifted factorial".into(), index: self.k });
            }
            d = d * f;
            *x = x.clone() * &*base;
        }
        self.k += 1;
        self.value = self.value.clone() * &n.checked_div(&d)?;
        Ok(self.value.clone())
    }
}

/// A ratio of infinite products with its relative error bound.
struct Prefactor {
    value: BigReal,
    bound: BigReal,
    factors: usize,
}

fn prefactor(num: &[(BigReal, &QParams<BigReal>)], den: &[(BigReal, &QParams<BigReal>)], eps: &BigReal) -> Result<Prefactor> {
    let p = eps.precision_bits();
    let one = BigReal::one(p);
    let count = (num.len() + den.len()).max(1) as i64;
    let each = eps.checked_div(&BigReal::from_i64(count, p))?;
    let mut value = one.clone();
    let mut grow = one.clone();
    let mut shrink = one.clone();
    let mut factors = 0;
    for (x, q) in num {
        let part = q_pochhammer_inf(x, q, &each)?;
        value = value * part.value;
        grow = grow * (one.clone() + &part.bound);
        factors += part.factors;
    }
    for (x, q) in den {
        let part = q_pochhammer_inf(x, q, &each)?;
        value = value.checked_div(&part.value)?;
        shrink = shrink * (one.clone() - &part.bound);
        factors += part.factors;
    }
    let bound = grow.checked_div(&shrink)? - &one;
    Ok(Prefactor { value, bound, factors })
}

/// Combines a prefactor with a summed series into one side.
fn scaled(pre: &Prefactor, sum: SumResult) -> SumResult {
    let one = BigReal::one(pre.bound.precision_bits());
    let value = pre.value.clone() * &sum.value;
    let tail = pre.value.abs() * &sum.tail_bound * &(one + &pre.bound) + value.abs() * &pre.bound;
    SumResult {
        value,
        terms_used: sum.terms_used + pre.factors,
        tail_bound: tail,
        terminated: false,
        method: sum.method,
    }
}

// --- classical streams ----------------------------------------------------------

fn classical_lhs(id: Id, p: usize) -> TermStream<'static> {
    let one = BigReal::one(p);
    match id {
        Id::Ramanujan => {
            let mut h = one;
            TermStream::new(0, TailModel::Ratio(rat(&[1], &[4], p)), move |k| {
                let k = k as i64;
                if k > 0 {
                    h = h.clone() * &rat(&[2 * k - 1, 2 * k - 1, 2 * k - 1], &[32, k, k, k], p);
                }
                Ok(h.clone() * &BigReal::from_i64(6 * k + 1, p))
            })
        }
        Id::Eq11a | Id::Eq11b => {
            let alternating = id == Id::Eq11b;
            let scale = if alternating { 64 } else { 32 };
            let limit = if alternating { rat(&[1], &[8], p) } else { rat(&[1], &[4], p) };
            let mut h = one.clone();
            let mut inner = BigReal::zero(p);
            TermStream::new(1, TailModel::Ratio(limit), move |k| {
                let k = k as i64;
                h = h.clone() * &rat(&[2 * k - 1, 2 * k - 1, 2 * k - 1], &[scale, k, k, k], p);
                inner = inner.clone() + &rat(&[1], &[2 * k - 1, 2 * k - 1], p) - &rat(&[1], &[16, k, k], p);
                let t = h.clone() * &inner * &BigReal::from_i64(6 * k + 1, p);
                Ok(signed(t, alternating && k % 2 == 1))
            })
        }
        Id::Eq21 => {
            let mut h = one.clone();
            let mut inner = BigReal::zero(p);
            TermStream::new(1, TailModel::Ratio(rat(&[1], &[4], p)), move |k| {
                let k = k as i64;
                // (-1/2)_k^2 / (4^k k! (3/2)_k)
                h = h.clone() * &rat(&[2 * k - 3, 2 * k - 3], &[8, k, 2 * k + 1], p);
                inner = inner.clone() + &rat(&[1], &[2 * k - 1, 2 * k - 1], p);
                Ok(h.clone() * &inner * &BigReal::from_i64(6 * k - 1, p))
            })
        }
        Id::Eq12 => {
            let mut h = one.clone();
            let mut inner = BigReal::zero(p);
            TermStream::new(1, TailModel::Algebraic { exponent_halves: 1 }, move |k| {
                let k = k as i64;
                h = h.clone() * &rat(&[2 * k - 1, 2 * k - 1, 2 * k - 1], &[8, k, k, k], p);
                // the pair i = 2k-1, 2k of sum (-1)^i / i^2, combined
                inner = inner.clone() + &rat(&[1 - 4 * k], &[2 * k - 1, 2 * k - 1, 4, k, k], p);
                let t = h.clone() * &inner * &BigReal::from_i64(4 * k + 1, p);
                Ok(signed(t, k % 2 == 1))
            })
        }
        Id::Eq23 => {
            let mut h = one.clone();
            let mut inner = BigReal::zero(p);
            TermStream::new(1, TailModel::Algebraic { exponent_halves: 4 }, move |k| {
                let k = k as i64;
                // (-1/2)_k (1/2)_k^3 / ((k+1)! k!^3)
                h = h.clone() * &rat(&[2 * k - 3, 2 * k - 1, 2 * k - 1, 2 * k - 1], &[16, k + 1, k, k, k], p);
                // the pair i = 2k-1, 2k of sum (-1)^(i-1) / i^2, combined
                inner = inner.clone() + &rat(&[4 * k - 1], &[2 * k - 1, 2 * k - 1, 4, k, k], p);
                Ok(h.clone() * &inner * &BigReal::from_i64(4 * k + 1, p))
            })
        }
        Id::Eq24 | Id::Eq25 => {
            let first = id == Id::Eq24;
            let mut h = if first { rat(&[1], &[2], p) } else { one.clone() };
            let mut inner = BigReal::zero(p);
            let halves = if first { 8 } else { 4 };
            TermStream::new(1, TailModel::Algebraic { exponent_halves: halves }, move |k| {
                let k = k as i64;
                let step = if first {
                    // (-1/2)_k (1/2)_k^2 (3/2)_k / (k! (k+1)!^2 (k+2)!)
                    rat(&[2 * k - 3, 2 * k - 1, 2 * k - 1, 2 * k + 1], &[16, k, k + 1, k + 1, k + 2], p)
                } else {
                    // (3/2)_k (1/2)_k^3 / (k! (k+1)!^3)
                    rat(&[2 * k + 1, 2 * k - 1, 2 * k - 1, 2 * k - 1], &[16, k, k + 1, k + 1, k + 1], p)
                };
                h = h.clone() * &step;
                inner = inner.clone() + &rat(&[1], &[2 * k - 1, 2 * k - 1], p) - &rat(&[1], &[4, k + 1, k + 1], p);
                Ok(h.clone() * &inner * &BigReal::from_i64(4 * k + 3, p))
            })
        }
        Id::Eq26 => {
            let mut h = one.clone();
            let mut inner = BigReal::zero(p);
            TermStream::new(1, TailModel::Algebraic { exponent_halves: 3 }, move |k| {
                let k = k as i64;
                // (3/2)_k (1/2)_k^2 / (k! (k+1)!^2)
                h = h.clone() * &rat(&[2 * k + 1, 2 * k - 1, 2 * k - 1], &[8, k, k + 1, k + 1], p);
                inner = inner.clone() + &rat(&[1], &[k + 1, k + 1], p) - &rat(&[4], &[2 * k - 1, 2 * k - 1], p);
                let t = h.clone() * &inner * &BigReal::from_i64(4 * k + 3, p);
                Ok(signed(t, k % 2 == 1))
            })
        }
        Id::EulerZeta2 => TermStream::new(1, TailModel::Algebraic { exponent_halves: 2 }, move |k| {
            let k = k as i64;
            Ok(rat(&[1], &[k, k], p))
        }),
        _ => unreachable!("not a classical identity"),
    }
}

fn classical_rhs(id: Id, p: usize) -> Result<BigReal> {
    let pi = pi(p)?;
    let pi2 = pi.clone() * &pi;
    let r = |n, d| BigReal::from_ratio(n, d, p);
    Ok(match id {
        Id::Ramanujan => r(4, 1).checked_div(&pi)?,
        Id::Eq11a | Id::Eq12 => pi.checked_div(&r(12, 1))?,
        Id::Eq11b => -(BigReal::from_i64(2, p).sqrt()? * &pi).checked_div(&r(48, 1))?,
        Id::Eq21 => (pi2 * &pi).checked_div(&r(144, 1))?,
        Id::Eq23 => r(2, 3) - r(8, 1).checked_div(&pi2)?,
        Id::Eq24 => r(32, 27) - r(992, 81).checked_div(&pi2)?,
        Id::Eq25 => r(8, 3) - r(24, 1).checked_div(&pi2)?,
        Id::Eq26 => r(4, 3) * &pi - r(8, 1).checked_div(&pi)?,
        Id::EulerZeta2 => pi2.checked_div(&r(6, 1))?,
        _ => unreachable!("not a classical identity"),
    })
}

// --- q streams ---------------------------------------------------------------------

fn q_lhs(id: Id, args: &InfiniteArgs, p: usize) -> Result<TermStream<'static>> {
    let qp = args.base(p)?;
    let q = qp.q().clone();
    let one = BigReal::one(p);
    let zero = BigReal::zero(p);
    let pw = |m: i64| qp.power(m);
    let q2 = pw(2);
    let q4 = pw(4);
    let mut powers = Powers::new(&q);
    Ok(match id {
        Id::Eq13 => {
            let mut hyp = Hyper::new(vec![(q.clone(), q2.clone()); 3], vec![(q2.clone(), q2.clone()); 3], p);
            let mut inner = zero;
            TermStream::new(1, TailModel::Ratio(BigReal::zero(p)), move |k| {
                let k = k as i64;
                let h = hyp.advance()?;
                inner = inner.clone() + &powers.weight(2 * k) - &powers.weight(2 * k - 1);
                let t = powers.get(k * k) * &powers.qint(4 * k + 1) * &h * &inner;
                Ok(signed(t, k % 2 == 1))
            })
        }
        Id::Eq22 => {
            let num = vec![(pw(-1), q2.clone()), (q.clone(), q2.clone()), (q.clone(), q2.clone()), (pw(-2), q4.clone())];
            let den = vec![(q4.clone(), q4.clone()), (q2.clone(), q4.clone()), (q2.clone(), q4.clone()), (pw(3), q2.clone())];
            let mut hyp = Hyper::new(num, den, p);
            let mut inner = zero;
            TermStream::new(1, TailModel::Ratio(BigReal::zero(p)), move |k| {
                let k = k as i64;
                let h = hyp.advance()?;
                inner = inner.clone() + &powers.weight(2 * k - 1) - &powers.weight(4 * k - 2);
                Ok(powers.qint(6 * k - 1) * &h * &powers.get((k + 1) * (k + 1)) * &inner)
            })
        }
        Id::Eq27 | Id::Eq27Corrected => {
            let mut num = vec![(q.clone(), q2.clone()); 3];
            num.push((pw(-1), q2.clone()));
            let mut den = vec![(q2.clone(), q2.clone()); 3];
            den.push((q4.clone(), q2.clone()));
            let mut hyp = Hyper::new(num, den, p);
            let mut inner = zero;
            TermStream::new(1, TailModel::Ratio(q2.clone()), move |k| {
                let k = k as i64;
                let h = hyp.advance()?;
                inner = inner.clone() + &powers.weight(2 * k) - &powers.weight(2 * k - 1);
                Ok(powers.qint(4 * k + 1) * &h * &powers.get(2 * k) * &inner)
            })
        }
        Id::Eq28 | Id::Eq28Corrected => {
            let num = vec![(q.clone(), q2.clone()), (q.clone(), q2.clone()), (pw(3), q2.clone()), (pw(-1), q2.clone())];
            let den = vec![(q4.clone(), q2.clone()), (q4.clone(), q2.clone()), (q2.clone(), q2.clone()), (pw(6), q2.clone())];
            let mut hyp = Hyper::new(num, den, p);
            let mut inner = zero;
            TermStream::new(1, TailModel::Ratio(q4.clone()), move |k| {
                let k = k as i64;
                let h = hyp.advance()?;
                inner = inner.clone() + &powers.weight(2 * k + 2) - &powers.weight(2 * k - 1);
                Ok(powers.qint(4 * k + 3) * &h * &powers.get(4 * k) * &inner)
            })
        }
        Id::Eq29 | Id::Eq29Corrected => {
            let mut num = vec![(q.clone(), q2.clone()); 3];
            num.push((pw(3), q2.clone()));
            let mut den = vec![(q4.clone(), q2.clone()); 3];
            den.push((q2.clone(), q2.clone()));
            let mut hyp = Hyper::new(num, den, p);
            let mut inner = zero;
            TermStream::new(1, TailModel::Ratio(q2.clone()), move |k| {
                let k = k as i64;
                let h = hyp.advance()?;
                inner = inner.clone() + &powers.weight(2 * k + 2) - &powers.weight(2 * k - 1);
                Ok(powers.qint(4 * k + 3) * &h * &powers.get(2 * k) * &inner)
            })
        }
        Id::Eq210 | Id::Eq210Corrected => {
            let literal = id == Id::Eq210;
            // (q; q^2)_{k+1} = (1 - q) (q^3; q^2)_k
            let num = vec![(pw(3), q2.clone()), (q.clone(), q2.clone()), (q.clone(), q2.clone())];
            let den = vec![(q2.clone(), q2.clone()), (q4.clone(), q2.clone()), (q4.clone(), q2.clone())];
            let mut hyp = Hyper::new(num, den, p);
            let mut inner = zero;
            let lead = one.clone() - &q;
            let tail = if literal { TailModel::Unknown } else { TailModel::Ratio(BigReal::zero(p)) };
            TermStream::new(1, tail, move |k| {
                let k = k as i64;
                let h = hyp.advance()?;
                inner = inner.clone() + &powers.weight(2 * k + 2) - &powers.weight(2 * k - 1);
                let gauss = if literal { powers.get(-k * (k + 4)) } else { powers.get(k * (k + 2)) };
                let t = powers.qint(4 * k + 3) * &lead * &h * &gauss * &inner;
                Ok(signed(t, k % 2 == 1))
            })
        }
        Id::Eq41 => {
            let (a, b, d, f) = (args.get("a")?, args.get("b")?, args.get("d")?, args.get("f")?);
            let (a, b, d, f) = (a.with_precision(p), b.with_precision(p), d.with_precision(p), f.with_precision(p));
            let aq = a.clone() * &q;
            let num = vec![
                (a.clone(), q.clone()),
                (b.clone(), q.clone()),
                (q.checked_div(&b)?, q.clone()),
                (d.clone(), q2.clone()),
                (f.clone(), q2.clone()),
                ((a.clone() * &aq).checked_div(&(d.clone() * &f))?, q2.clone()),
            ];
            let den = vec![
                (q2.clone(), q2.clone()),
                ((aq.clone() * &q).checked_div(&b)?, q2.clone()),
                (aq.clone() * &b, q2.clone()),
                (aq.checked_div(&d)?, q.clone()),
                (aq.checked_div(&f)?, q.clone()),
                ((d.clone() * &f).checked_div(&a)?, q.clone()),
            ];
            let mut hyp = Hyper::new(num, den, p);
            let scale = (one.clone() - &a).recip()?;
            TermStream::new(0, TailModel::Ratio(q.clone()), move |k| {
                let k = k as i64;
                let h = if k == 0 { BigReal::one(p) } else { hyp.advance()? };
                let well = (BigReal::one(p) - &(a.clone() * &powers.get(3 * k))) * &scale;
                Ok(well * &h * &powers.get(k))
            })
        }
        _ => unreachable!("not a q-series identity"),
    })
}

/// Alternating or plain sums of `q^m / [m]^2` that appear on the right.
fn q_rhs(id: Id, args: &InfiniteArgs, tol: &BigReal, max_terms: usize, p: usize) -> Result<SumResult> {
    let qp = args.base(p)?;
    let q = qp.q().clone();
    let one = BigReal::one(p);
    let half_tol = tol.clone() * &BigReal::from_ratio(1, 2, p);
    let q1 = qp.clone();
    let q2 = qp.power_base(2);
    let q4 = qp.power_base(4);
    let pw = |m: i64| qp.power(m);
    let mut powers = Powers::new(&q);
    let gap = one.clone() - &q;

    let (pre, stream) = match id {
        Id::Eq13 => {
            let pre = prefactor(&[(q.clone(), &q2), (pw(3), &q2)], &[(pw(2), &q2), (pw(2), &q2)], &half_tol)?;
            let s = TermStream::new(1, TailModel::Ratio(pw(2)), move |j| Ok(powers.weight(2 * j as i64)));
            (pre, s)
        }
        Id::Eq22 => {
            let pre = prefactor(
                &[(q.clone(), &q4), (pw(4), &q4), (pw(4), &q4)],
                &[(pw(5), &q4), (pw(2), &q4), (pw(2), &q4)],
                &half_tol,
            )?;
            let s = TermStream::new(1, TailModel::Ratio(pw(4)), move |i| {
                let i = i as i64;
                Ok(powers.weight(4 * i - 2) - &powers.weight(4 * i))
            });
            (pre, s)
        }
        Id::Eq27 | Id::Eq27Corrected => {
            let literal = id == Id::Eq27;
            let pre = prefactor(
                &[(pw(3), &q2), (pw(3), &q2), (pw(3), &q2), (q.clone(), &q2)],
                &[(pw(2), &q2), (pw(2), &q2), (pw(2), &q2), (pw(4), &q2)],
                &half_tol,
            )?;
            let s = TermStream::new(1, TailModel::Ratio(q.clone()), move |i| {
                let i = i as i64;
                let main = signed(powers.weight(i + 1), i % 2 == 0);
                if !literal {
                    return Ok(main);
                }
                // literal form: ((-1)^(i+1)/[i+1]^2 - q^(3i)(1-q)/(2[2i+1]^2)) q^(i+1)
                let qi = powers.qint(2 * i + 1);
                let extra = (powers.get(3 * i) * &gap * &powers.get(i + 1))
                    .checked_div(&(BigReal::from_i64(2, p) * &qi * &qi))?;
                Ok(main - extra)
            });
            (pre, s)
        }
        Id::Eq28 | Id::Eq28Corrected => {
            let literal = id == Id::Eq28;
            let mut pre = prefactor(
                &[(pw(3), &q2), (pw(5), &q2), (pw(5), &q2), (pw(3), &q2)],
                &[(pw(4), &q2), (pw(4), &q2), (pw(4), &q2), (pw(6), &q2)],
                &half_tol,
            )?;
            pre.value = pre.value.checked_div(&gap)?;
            let s = TermStream::new(1, TailModel::Ratio(q.clone()), move |i| {
                let i = i as i64;
                let main = signed(powers.weight(i + 3), i % 2 == 0);
                if !literal {
                    return Ok(main);
                }
                let qi = powers.qint(2 * i + 3);
                let extra = (powers.get(3 * i + 2) * &gap * &powers.get(i + 3))
                    .checked_div(&(BigReal::from_i64(2, p) * &qi * &qi))?;
                Ok(main - extra)
            });
            (pre, s)
        }
        Id::Eq29 | Id::Eq29Corrected => {
            let literal = id == Id::Eq29;
            let mut pre = prefactor(
                &[(pw(3), &q2), (pw(3), &q2), (pw(3), &q2), (pw(3), &q2)],
                &[(pw(4), &q2), (pw(4), &q2), (pw(4), &q2), (pw(2), &q2)],
                &half_tol,
            )?;
            pre.value = pre.value.checked_div(&gap)?;
            let s = TermStream::new(1, TailModel::Ratio(q.clone()), move |i| {
                let i = i as i64;
                let main = signed(powers.weight(i + 2), i % 2 == 1);
                if !literal {
                    return Ok(main);
                }
                let qi = powers.qint(2 * i + 1);
                let extra = (powers.get(3 * i) * &gap * &powers.get(i + 2))
                    .checked_div(&(BigReal::from_i64(2, p) * &qi * &qi))?;
                Ok(main + extra)
            });
            (pre, s)
        }
        Id::Eq210 | Id::Eq210Corrected => {
            let pre = prefactor(&[(pw(3), &q2), (pw(3), &q2)], &[(pw(4), &q2), (pw(4), &q2)], &half_tol)?;
            let s = TermStream::new(1, TailModel::Ratio(pw(2)), move |i| Ok(powers.weight(2 * i as i64 + 2)));
            (pre, s)
        }
        Id::Eq41 => {
            let (a, b, d, f) = (args.get("a")?, args.get("b")?, args.get("d")?, args.get("f")?);
            let (a, b, d, f) = (a.with_precision(p), b.with_precision(p), d.with_precision(p), f.with_precision(p));
            let aq = a.clone() * &q;
            let aq2 = aq.clone() * &q;
            let pre = prefactor(
                &[
                    (aq.clone(), &q1),
                    (f.checked_div(&a)?, &q1),
                    (aq2.checked_div(&(b.clone() * &d))?, &q2),
                    ((aq.clone() * &b).checked_div(&d)?, &q2),
                    ((b.clone() * &d * &f).checked_div(&a)?, &q2),
                    ((d.clone() * &f * &q).checked_div(&(a.clone() * &b))?, &q2),
                ],
                &[
                    (aq.checked_div(&d)?, &q1),
                    ((d.clone() * &f).checked_div(&a)?, &q1),
                    (aq2.checked_div(&b)?, &q2),
                    (aq.clone() * &b, &q2),
                    ((b.clone() * &f).checked_div(&a)?, &q2),
                    ((f.clone() * &q).checked_div(&(a.clone() * &b))?, &q2),
                ],
                tol,
            )?;
            let value = pre.value.clone();
            return Ok(SumResult {
                tail_bound: value.abs() * &pre.bound,
                value,
                terms_used: pre.factors,
                terminated: false,
                method: Method::Direct,
            });
        }
        _ => unreachable!("not a q-series identity"),
    };
    let sum = sum_adaptive(stream, &half_tol, max_terms)?;
    Ok(scaled(&pre, sum))
}

/// The extra non-terminating piece on the left of the quadratic summation:
/// a product ratio times a 3phi2 in base `q^2`.
fn eq41_correction(args: &InfiniteArgs, tol: &BigReal, max_terms: usize, p: usize) -> Result<SumResult> {
    let qp = args.base(p)?;
    let q = qp.q().clone();
    let q1 = qp.clone();
    let q2 = qp.power_base(2);
    let (a, b, d, f) = (args.get("a")?, args.get("b")?, args.get("d")?, args.get("f")?);
    let (a, b, d, f) = (a.with_precision(p), b.with_precision(p), d.with_precision(p), f.with_precision(p));
    let qq2 = q2.q().clone();
    let half_tol = tol.clone() * &BigReal::from_ratio(1, 2, p);
    let aq = a.clone() * &q;
    let fq2d = (f.clone() * &qq2).checked_div(&d)?;
    let df2qa2 = (d.clone() * &f * &f * &q).checked_div(&a.square())?;
    let bfa = (b.clone() * &f).checked_div(&a)?;
    let fqab = (f.clone() * &q).checked_div(&(a.clone() * &b))?;
    let pre = prefactor(
        &[
            (aq.clone(), &q1),
            (f.checked_div(&a)?, &q1),
            (b.clone(), &q1),
            (q.checked_div(&b)?, &q1),
            (d.clone(), &q2),
            ((a.clone() * &aq).checked_div(&(d.clone() * &f))?, &q2),
            (fq2d.clone(), &q2),
            (df2qa2.clone(), &q2),
        ],
        &[
            (a.checked_div(&f)?, &q1),
            ((f.clone() * &q).checked_div(&a)?, &q1),
            (aq.checked_div(&d)?, &q1),
            ((d.clone() * &f).checked_div(&a)?, &q1),
            ((aq.clone() * &q).checked_div(&b)?, &q2),
            (aq.clone() * &b, &q2),
            (fqab.clone(), &q2),
            (bfa.clone(), &q2),
        ],
        &half_tol,
    )?;
    let num = vec![(f.clone(), qq2.clone()), (bfa, qq2.clone()), (fqab, qq2.clone())];
    let den = vec![(qq2.clone(), qq2.clone()), (fq2d, qq2.clone()), (df2qa2, qq2.clone())];
    let mut hyp = Hyper::new(num, den, p);
    let z = qq2.clone();
    let mut zk = BigReal::one(p);
    let stream = TermStream::new(0, TailModel::Ratio(qq2.clone()), move |k| {
        if k == 0 {
            return Ok(BigReal::one(p));
        }
        zk = zk.clone() * &z;
        Ok(hyp.advance()? * &zk)
    });
    let sum = sum_adaptive(stream, &half_tol, max_terms)?;
    Ok(scaled(&pre, sum))
}

/// Sums the left side of a non-terminating identity.
pub fn eval_lhs(id: Id, args: &InfiniteArgs, tol: &BigReal, max_terms: usize, p: usize) -> Result<SumResult> {
    if id.is_q_series() {
        let tol = tol.with_precision(p);
        let stream = q_lhs(id, args, p)?;
        let main = sum_adaptive(stream, &tol, max_terms)?;
        if id != Id::Eq41 {
            return Ok(main);
        }
        let extra = eq41_correction(args, &tol, max_terms, p)?;
        let value = main.value + &extra.value;
        return Ok(SumResult {
            value,
            terms_used: main.terms_used + extra.terms_used,
            tail_bound: main.tail_bound + &extra.tail_bound,
            terminated: false,
            method: Method::Adaptive,
        });
    }
    let stream = classical_lhs(id, p + GUARD_BITS);
    let extrapolated = matches!(stream.tail, TailModel::Algebraic { .. });
    let wp = if extrapolated { p + GUARD_BITS } else { p };
    let mut r = sum_adaptive(stream, &tol.with_precision(wp), max_terms)?;
    r.value = r.value.with_precision(p);
    r.tail_bound = r.tail_bound.with_precision(p);
    Ok(r)
}

/// Evaluates the right side of a non-terminating identity.
pub fn eval_rhs(id: Id, args: &InfiniteArgs, tol: &BigReal, max_terms: usize, p: usize) -> Result<SumResult> {
    if id.is_q_series() {
        return q_rhs(id, args, &tol.with_precision(p), max_terms, p);
    }
    Ok(SumResult::exact(classical_rhs(id, p)?, 0, Method::ClosedForm))
}

/// Checks that every required parameter is present and that `q` is a valid
/// base.
pub fn check_args(id: Id, args: &InfiniteArgs) -> Result<()> {
    for name in id.required_params() {
        args.get(name)?;
    }
    if let Some(q) = &args.q {
        if id.is_q_series() {
            QParams::new(q.clone())?;
        }
    }
    Ok(())
}

/// Both sides of a non-terminating identity with tail bounds. Missing or
/// invalid parameters are an error; convergence failures are reported per
/// side.
pub fn eval_identity_series(
    id: Id,
    args: &InfiniteArgs,
    tol: &BigReal,
    max_terms: usize,
    precision: usize,
) -> Result<SeriesEvaluation> {
    crate::numerics::check_precision(precision)?;
    check_args(id, args)?;
    let (lhs, rhs) = rayon::join(
        || eval_lhs(id, args, tol, max_terms, precision),
        || eval_rhs(id, args, tol, max_terms, precision),
    );
    Ok(SeriesEvaluation { lhs, rhs })
}

//! Term streams, adaptive summation with tail bounds, and the evaluators for
//! every summation formula and double series in the catalog.

mod extrapolate;
pub mod infinite;
pub mod terminating;

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::BigReal;

pub use extrapolate::{extrapolation_nodes, sum_extrapolated};
pub use infinite::{eval_identity_series, InfiniteArgs, InfiniteIdentity, SeriesEvaluation};

/// How the omitted part of a stream is bounded.
#[derive(Clone, Debug)]
pub enum TailModel {
    /// `|t_{k+1}/t_k|` tends to `limit < 1`.
    Ratio(BigReal),
    /// Partial sums approach the limit like `N^-(h/2)` with `h` the stored
    /// number of halves; summed by fitting an asymptotic expansion.
    Algebraic { exponent_halves: u32 },
    /// No a priori knowledge; observed ratios only.
    Unknown,
}

/// Successive terms `t_start, t_start+1, ...` of a series.
pub struct TermStream<'a> {
    next: Box<dyn FnMut(usize) -> Result<BigReal> + 'a>,
    pub start: usize,
    pub tail: TailModel,
    /// Last index that can be nonzero, for terminating series.
    pub terminates_at: Option<usize>,
}

impl<'a> TermStream<'a> {
    /// `next` is called with strictly increasing indices starting at `start`.
    pub fn new(start: usize, tail: TailModel, next: impl FnMut(usize) -> Result<BigReal> + 'a) -> Self {
        TermStream { next: Box::new(next), start, tail, terminates_at: None }
    }

    pub fn terminating(start: usize, last: usize, next: impl FnMut(usize) -> Result<BigReal> + 'a) -> Self {
        TermStream { next: Box::new(next), start, tail: TailModel::Unknown, terminates_at: Some(last) }
    }

    pub fn term(&mut self, k: usize) -> Result<BigReal> {
        (self.next)(k)
    }
}

/// How a side's value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Every nonzero term was added.
    Terminated,
    /// Ratio-bounded adaptive cutoff.
    Adaptive,
    /// Fit of partial sums to an algebraic asymptotic expansion.
    Extrapolated,
    /// Closed-form constant.
    ClosedForm,
    /// Finite sum or product evaluated directly.
    Direct,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::Terminated => "terminated",
            Method::Adaptive => "adaptive",
            Method::Extrapolated => "extrapolated",
            Method::ClosedForm => "closed_form",
            Method::Direct => "direct",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct SumResult {
    pub value: BigReal,
    pub terms_used: usize,
    pub tail_bound: BigReal,
    pub terminated: bool,
    pub method: Method,
}

impl SumResult {
    pub fn exact(value: BigReal, terms_used: usize, method: Method) -> Self {
        let p = value.precision_bits();
        SumResult { value, terms_used, tail_bound: BigReal::zero(p), terminated: true, method }
    }
}

/// Consecutive growing terms after which a stream is declared divergent.
pub const GROWTH_LIMIT: usize = 256;

/// Number of trailing small terms required before the tail is bounded.
const SMALL_RUN: usize = 3;

/// Sums a stream until the tail bound drops below `tol * max(1, |S|)`.
///
/// With a ratio bound `r < 1` (the larger of the known limit and the last
/// three observed ratios) the tail after `t_last` is bounded by
/// `|t_last| r / (1 - r)`. Streams with an algebraic tail are handed to
/// [`sum_extrapolated`].
pub fn sum_adaptive(stream: TermStream<'_>, tol: &BigReal, max_terms: usize) -> Result<SumResult> {
    if tol.sign() != Ordering::Greater {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    if max_terms == 0 {
        return Err(Error::InvalidArgument("term budget must be positive".into()));
    }
    if let TailModel::Algebraic { exponent_halves } = stream.tail {
        return sum_extrapolated(stream, exponent_halves, tol, max_terms);
    }
    let mut stream = stream;
    let p = tol.precision_bits();
    let one = BigReal::one(p);
    let limit = match &stream.tail {
        TailModel::Ratio(r) => Some(r.clone()),
        _ => None,
    };

    let mut sum = BigReal::zero(p);
    let mut prev: Option<BigReal> = None;
    let mut ratios: VecDeque<BigReal> = VecDeque::with_capacity(SMALL_RUN);
    let mut small = 0usize;
    let mut growing = 0usize;

    for used in 0..max_terms {
        let k = stream.start + used;
        if let Some(last) = stream.terminates_at {
            if k > last {
                return Ok(SumResult::exact(sum, used, Method::Terminated));
            }
        }
        let t = stream.term(k)?;
        sum = sum + &t;
        let mag = t.abs();
        if let Some(pm) = &prev {
            if !pm.is_zero() {
                if ratios.len() == SMALL_RUN {
                    ratios.pop_front();
                }
                ratios.push_back(mag.checked_div(pm)?);
            }
            growing = if mag > *pm { growing + 1 } else { 0 };
            if growing >= GROWTH_LIMIT {
                return Err(Error::NoConvergence {
                    terms: used + 1,
                    reason: format!("terms grew in magnitude {GROWTH_LIMIT} times in a row"),
                });
            }
        }
        let threshold = tol.clone() * &BigReal::max_of(&one, &sum.abs());
        small = if mag < threshold { small + 1 } else { 0 };
        if stream.terminates_at.is_none() && small >= SMALL_RUN {
            let observed = ratios.iter().fold(None::<BigReal>, |acc, r| match acc {
                Some(m) => Some(BigReal::max_of(&m, r)),
                None => Some(r.clone()),
            });
            let r = match (&limit, observed) {
                (Some(l), Some(o)) => Some(BigReal::max_of(l, &o)),
                (Some(l), None) if mag.is_zero() => Some(l.clone()),
                (None, Some(o)) => Some(o),
                _ => None,
            };
            if let Some(r) = r {
                if r < one {
                    let tail = (mag.clone() * &r).checked_div(&(one.clone() - &r))?;
                    if tail < threshold {
                        return Ok(SumResult {
                            value: sum,
                            terms_used: used + 1,
                            tail_bound: tail,
                            terminated: false,
                            method: Method::Adaptive,
                        });
                    }
                }
            }
        }
        prev = Some(mag);
    }
    Err(Error::NoConvergence { terms: max_terms, reason: "term budget exhausted".into() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol(p: usize) -> BigReal {
        BigReal::from_ratio(1, 1, p) * &BigReal::pow2(-100, p)
    }

    #[test]
    fn zero_stream_terminates() {
        let p = 128;
        let s = TermStream::terminating(0, 5, |_| Ok(BigReal::zero(p)));
        let r = sum_adaptive(s, &tol(p), 100).unwrap();
        assert!(r.value.is_zero());
        assert!(r.terminated);
        assert!(r.tail_bound.is_zero());
        assert_eq!(r.terms_used, 6);
    }

    #[test]
    fn geometric_series_within_bound() {
        let p = 192;
        let half = BigReal::from_ratio(1, 2, p);
        let s = TermStream::new(0, TailModel::Ratio(half.clone()), |k| half.powi(k as i64));
        let r = sum_adaptive(s, &tol(p), 1000).unwrap();
        let err = (r.value.clone() - &BigReal::from_i64(2, p)).abs();
        assert!(err <= r.tail_bound, "{err:?} vs {:?}", r.tail_bound);
        assert_eq!(r.method, Method::Adaptive);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let p = 64;
        let s = TermStream::new(1, TailModel::Unknown, |k| BigReal::from_i64(1, p).checked_div(&BigReal::from_i64(k as i64, p)));
        let err = sum_adaptive(s, &tol(p), 50).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { terms: 50, .. }));
    }

    #[test]
    fn growing_terms_are_divergent() {
        let p = 64;
        let s = TermStream::new(0, TailModel::Unknown, |k| Ok(BigReal::from_i64(k as i64 + 1, p)));
        let err = sum_adaptive(s, &tol(p), 10_000).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { terms, .. } if terms == GROWTH_LIMIT + 1));
    }
}

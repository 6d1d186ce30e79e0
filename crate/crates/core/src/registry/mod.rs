//! Catalog of identities and the verification engine built on it: single
//! verifications, filtered batch runs, q sweeps and q -> 1 limit studies.

mod draws;
mod params;
mod report;

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use dashu_ratio::RBig;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{check_precision, parse_rational, BigReal, Exact, Scalar};
use crate::qkernel::QParams;
use crate::series::infinite::{eval_lhs, InfiniteArgs, InfiniteIdentity, GUARD_BITS};
use crate::series::terminating::{
    dougall_balanced_e, eval_7f6, eval_dougall, eval_eq32, eval_eq33, eval_eq42, eval_jackson, eval_lemma51,
    eval_quadratic_truncated, jackson_balanced_e, Sides,
};
use crate::series::{eval_identity_series, SumResult};

pub use draws::{committed_draws, generate_draws, DrawSet, DRAWS_PER_IDENTITY, DRAW_SEED};
pub use params::{IdentityParams, PARAM_NAMES};
pub use report::{aggregate_exit_code, LimitStudy, Rung, Status, Summary, Verdict, VerificationReport};

const CATALOG: &str = include_str!("catalog.toml");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Terminating,
    InfiniteClassical,
    InfiniteQ,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Terminating => "terminating",
            Family::InfiniteClassical => "infinite_classical",
            Family::InfiniteQ => "infinite_q",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "terminating" => Ok(Family::Terminating),
            "infinite_classical" => Ok(Family::InfiniteClassical),
            "infinite_q" => Ok(Family::InfiniteQ),
            _ => Err(Error::InvalidArgument(format!("unknown family `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedStatus {
    Verified,
    Suspect,
}

impl fmt::Display for ExpectedStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExpectedStatus::Verified => "verified",
            ExpectedStatus::Suspect => "suspect",
        })
    }
}

impl FromStr for ExpectedStatus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "verified" => Ok(ExpectedStatus::Verified),
            "suspect" => Ok(ExpectedStatus::Suspect),
            _ => Err(Error::InvalidArgument(format!("unknown expected status `{s}`"))),
        }
    }
}

/// The finite identities, checked exactly in rational mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TerminatingId {
    Eq31,
    Eq32,
    Eq33,
    Eq41Truncated,
    Eq42,
    Lemma51,
    Eq52,
    Dougall,
}

impl TerminatingId {
    pub const ALL: [TerminatingId; 8] = [
        TerminatingId::Eq31,
        TerminatingId::Eq32,
        TerminatingId::Eq33,
        TerminatingId::Eq41Truncated,
        TerminatingId::Eq42,
        TerminatingId::Lemma51,
        TerminatingId::Eq52,
        TerminatingId::Dougall,
    ];

    pub fn key(self) -> &'static str {
        match self {
            TerminatingId::Eq31 => "eq3.1",
            TerminatingId::Eq32 => "eq3.2",
            TerminatingId::Eq33 => "eq3.3",
            TerminatingId::Eq41Truncated => "eq4.1-truncated",
            TerminatingId::Eq42 => "eq4.2",
            TerminatingId::Lemma51 => "lemma5.1",
            TerminatingId::Eq52 => "eq5.2",
            TerminatingId::Dougall => "dougall-7f6",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.key() == key)
    }

    /// Parameters drawn at random besides `n`.
    pub fn drawn_params(self) -> &'static [&'static str] {
        match self {
            TerminatingId::Eq31 | TerminatingId::Eq32 | TerminatingId::Eq33 => &["a", "b", "c"],
            TerminatingId::Eq41Truncated | TerminatingId::Eq42 | TerminatingId::Lemma51 => &["a", "b", "c", "q"],
            TerminatingId::Eq52 => &["a", "b", "c", "d", "q"],
            TerminatingId::Dougall => &["a", "b", "c", "d"],
        }
    }
}

/// What computes the two sides of an entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Evaluator {
    Terminating(TerminatingId),
    Series(InfiniteIdentity),
}

impl Evaluator {
    pub fn for_id(id: &str) -> Option<Self> {
        TerminatingId::from_key(id)
            .map(Evaluator::Terminating)
            .or_else(|| InfiniteIdentity::from_key(id).map(Evaluator::Series))
    }

    fn family(self) -> Family {
        match self {
            Evaluator::Terminating(_) => Family::Terminating,
            Evaluator::Series(s) if s.is_q_series() => Family::InfiniteQ,
            Evaluator::Series(_) => Family::InfiniteClassical,
        }
    }
}

/// One catalog record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentitySpec {
    pub id: String,
    pub family: Family,
    pub citation: String,
    pub required_params: Vec<String>,
    pub constraints: String,
    pub expected_status: ExpectedStatus,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub defaults: BTreeMap<String, String>,
}

impl IdentitySpec {
    pub fn evaluator(&self) -> Evaluator {
        Evaluator::for_id(&self.id).expect("checked at load")
    }

    pub fn default_params(&self) -> IdentityParams {
        IdentityParams::from_strings(&self.defaults).expect("checked at load")
    }

    pub fn is_q_identity(&self) -> bool {
        self.required_params.iter().any(|p| p == "q")
    }
}

#[derive(Deserialize)]
struct CatalogFile {
    identity: Vec<IdentitySpec>,
}

/// Immutable, id-sorted set of identity records.
#[derive(Clone, Debug)]
pub struct Catalog {
    entries: Vec<IdentitySpec>,
}

impl Catalog {
    /// The catalog compiled into the crate.
    pub fn load() -> Result<Self> {
        Self::from_toml(CATALOG)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let file: CatalogFile = toml::from_str(text).map_err(|e| Error::Catalog(e.to_string()))?;
        let mut seen = HashSet::new();
        for spec in &file.identity {
            if !seen.insert(spec.id.clone()) {
                return Err(Error::Catalog(format!("duplicate id `{}`", spec.id)));
            }
            let eval = Evaluator::for_id(&spec.id)
                .ok_or_else(|| Error::Catalog(format!("no evaluator for `{}`", spec.id)))?;
            if eval.family() != spec.family {
                return Err(Error::Catalog(format!("`{}` is listed under the wrong family", spec.id)));
            }
            for p in &spec.required_params {
                if !PARAM_NAMES.contains(&p.as_str()) {
                    return Err(Error::Catalog(format!("`{}` requires unknown parameter `{p}`", spec.id)));
                }
            }
            IdentityParams::from_strings(&spec.defaults)
                .map_err(|e| Error::Catalog(format!("bad defaults for `{}`: {e}", spec.id)))?;
        }
        let mut entries = file.identity;
        entries.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(Catalog { entries })
    }

    pub fn entries(&self) -> &[IdentitySpec] {
        &self.entries
    }

    pub fn ids(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.id.as_str()).collect()
    }

    pub fn get(&self, id: &str) -> Result<&IdentitySpec> {
        self.entries.iter().find(|e| e.id == id).ok_or_else(|| Error::UnknownIdentity(id.to_string()))
    }

    pub fn filter(&self, filter: &Filter) -> Vec<&IdentitySpec> {
        self.entries.iter().filter(|e| filter.matches(e)).collect()
    }
}

/// Selection of catalog entries by `key=value` clauses; all clauses must hold.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Filter {
    pub family: Option<Family>,
    pub expected_status: Option<ExpectedStatus>,
    pub id_prefix: Option<String>,
}

impl Filter {
    /// Keys: `family`, `status` (expected status) and `id` (prefix).
    pub fn parse<'a>(clauses: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let mut f = Filter::default();
        for clause in clauses {
            let (k, v) = clause
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("filter must be key=value, got `{clause}`")))?;
            match k.trim() {
                "family" => f.family = Some(v.trim().parse()?),
                "status" => f.expected_status = Some(v.trim().parse()?),
                "id" => f.id_prefix = Some(v.trim().to_string()),
                other => return Err(Error::InvalidArgument(format!("unknown filter key `{other}`"))),
            }
        }
        Ok(f)
    }

    pub fn matches(&self, spec: &IdentitySpec) -> bool {
        self.family.map_or(true, |f| f == spec.family)
            && self.expected_status.map_or(true, |s| s == spec.expected_status)
            && self.id_prefix.as_deref().map_or(true, |p| spec.id.starts_with(p))
    }
}

/// Numerical settings shared by every verification.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub tol: RBig,
    pub max_terms: usize,
    pub precision: usize,
    /// Exact rational arithmetic for the terminating identities.
    pub rational: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            tol: parse_rational("1e-30").expect("literal"),
            max_terms: 20_000,
            precision: crate::numerics::DEFAULT_PRECISION,
            rational: false,
        }
    }
}

impl VerifyOptions {
    pub fn validate(&self) -> Result<()> {
        check_precision(self.precision)?;
        if Exact::new(self.tol.clone()).sign() != std::cmp::Ordering::Greater {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        if self.max_terms == 0 {
            return Err(Error::InvalidArgument("max_terms must be positive".into()));
        }
        Ok(())
    }

    pub fn tol_real(&self) -> BigReal {
        BigReal::from_rational(&self.tol, self.precision)
    }
}

/// Both sides of a terminating identity in any scalar type.
pub(crate) fn eval_terminating<S: Scalar>(
    tid: TerminatingId,
    get: &dyn Fn(&str) -> Result<S>,
    params: &IdentityParams,
) -> Result<Sides<S>> {
    let n = params.n()?;
    let (a, b) = (get("a")?, get("b")?);
    let base = || QParams::new(get("q")?);
    match tid {
        TerminatingId::Eq31 => eval_7f6(&a, &b, &get("c")?, n),
        TerminatingId::Eq32 => eval_eq32(&a, &b, &get("c")?, n),
        TerminatingId::Eq33 => eval_eq33(&a, &b, &get("c")?, n),
        TerminatingId::Eq41Truncated => eval_quadratic_truncated(&a, &b, &get("c")?, n, &base()?),
        TerminatingId::Eq42 => eval_eq42(&a, &b, &get("c")?, n, &base()?),
        TerminatingId::Lemma51 => eval_lemma51(&a, &b, &get("c")?, n, &base()?),
        TerminatingId::Eq52 => {
            let q = base()?;
            let (c, d) = (get("c")?, get("d")?);
            let e = if params.contains("e") { get("e")? } else { jackson_balanced_e(&a, &b, &c, &d, n, &q)? };
            eval_jackson(&a, &b, &c, &d, &e, n, &q)
        }
        TerminatingId::Dougall => {
            let (c, d) = (get("c")?, get("d")?);
            let e = if params.contains("e") { get("e")? } else { dougall_balanced_e(&a, &b, &c, &d, n) };
            eval_dougall(&a, &b, &c, &d, &e, n)
        }
    }
}

fn precision_tag(p: usize) -> String {
    format!("{p} bits")
}

/// Side failures that mean the inputs were unusable rather than that the
/// identity failed.
fn is_precondition(e: &Error) -> bool {
    !matches!(e, Error::NoConvergence { .. })
}

fn mismatch_status(expected: ExpectedStatus) -> Status {
    match expected {
        ExpectedStatus::Verified => Status::Fail,
        ExpectedStatus::Suspect => Status::Mismatch,
    }
}

/// `2^(10-p) max(|lhs|, |rhs|)`.
pub fn rounding_allowance(lhs: &BigReal, rhs: &BigReal, precision: usize) -> BigReal {
    BigReal::max_of(&lhs.abs(), &rhs.abs()) * &BigReal::pow2(10 - precision as isize, precision)
}

fn fill_real(
    report: &mut VerificationReport,
    lhs: &SumResult,
    rhs: &SumResult,
    expected: ExpectedStatus,
    p: usize,
) {
    let abs = (lhs.value.clone() - &rhs.value).abs();
    let scale = BigReal::max_of(&lhs.value.abs(), &rhs.value.abs());
    let rel = if scale.is_zero() { BigReal::zero(p) } else { abs.checked_div(&scale).expect("nonzero") };
    let bound = lhs.tail_bound.clone() + &rhs.tail_bound + &rounding_allowance(&lhs.value, &rhs.value, p);
    report.lhs = Some(lhs.value.with_precision(p).to_decimal_string());
    report.rhs = Some(rhs.value.with_precision(p).to_decimal_string());
    report.abs_residual = Some(abs.to_decimal_digits(6));
    report.rel_residual = Some(rel.to_decimal_digits(6));
    report.lhs_tail = Some(lhs.tail_bound.to_decimal_digits(6));
    report.rhs_tail = Some(rhs.tail_bound.to_decimal_digits(6));
    report.lhs_terms = Some(lhs.terms_used);
    report.rhs_terms = Some(rhs.terms_used);
    report.lhs_method = Some(lhs.method);
    report.rhs_method = Some(rhs.method);
    if abs <= bound {
        report.status = Status::Pass;
    } else {
        report.status = mismatch_status(expected);
        report.diagnostic = Some(format!("residual exceeds bound {}", bound.to_decimal_digits(6)));
    }
}

fn run_terminating(report: &mut VerificationReport, tid: TerminatingId, params: &IdentityParams, opts: &VerifyOptions, expected: ExpectedStatus) {
    let p = opts.precision;
    if opts.rational {
        let get = |name: &str| params.exact(name);
        match eval_terminating::<Exact>(tid, &get, params) {
            Ok(s) => {
                let abs = (s.lhs.clone() - &s.rhs).abs();
                let scale = std::cmp::max(s.lhs.abs(), s.rhs.abs());
                let rel = if scale.is_zero() { Exact::from_int(0) } else { abs.checked_div(&scale).expect("nonzero") };
                report.lhs = Some(s.lhs.to_string());
                report.rhs = Some(s.rhs.to_string());
                report.abs_residual = Some(abs.to_string());
                report.rel_residual = Some(rel.to_string());
                report.lhs_tail = Some("0".into());
                report.rhs_tail = Some("0".into());
                let terms = params.n().map(|n| n + 1).ok();
                report.lhs_terms = terms;
                report.rhs_terms = Some(1);
                report.lhs_method = Some(crate::series::Method::Terminated);
                report.rhs_method = Some(crate::series::Method::Direct);
                if abs.is_zero() {
                    report.status = Status::Pass;
                } else {
                    report.status = mismatch_status(expected);
                    report.diagnostic = Some("nonzero exact residual".into());
                }
            }
            Err(e) => report.diagnostic = Some(e.to_string()),
        }
        return;
    }
    // Finite sums can cancel heavily, so each side's rounding error is
    // estimated by repeating the evaluation with guard bits.
    let get = |name: &str| params.real(name, p);
    let guarded = p + GUARD_BITS;
    let get_guarded = |name: &str| params.real(name, guarded);
    let sides = eval_terminating::<BigReal>(tid, &get, params)
        .and_then(|s| eval_terminating::<BigReal>(tid, &get_guarded, params).map(|g| (s, g)));
    match sides {
        Ok((s, g)) => {
            let n = params.n().unwrap_or(0);
            let two = BigReal::from_i64(2, guarded);
            let mut lhs = SumResult::exact(s.lhs.clone(), n + 1, crate::series::Method::Terminated);
            lhs.tail_bound = ((s.lhs - &g.lhs).abs() * &two).with_precision(p);
            let mut rhs = SumResult::exact(s.rhs.clone(), 1, crate::series::Method::Direct);
            rhs.tail_bound = ((s.rhs - &g.rhs).abs() * &two).with_precision(p);
            fill_real(report, &lhs, &rhs, expected, p);
        }
        Err(e) => report.diagnostic = Some(e.to_string()),
    }
}

fn run_series(report: &mut VerificationReport, id: InfiniteIdentity, params: &IdentityParams, opts: &VerifyOptions, expected: ExpectedStatus) {
    let p = opts.precision;
    let args = InfiniteArgs {
        q: params.real_opt("q", p),
        a: params.real_opt("a", p),
        b: params.real_opt("b", p),
        d: params.real_opt("d", p),
        f: params.real_opt("f", p),
    };
    let eval = match eval_identity_series(id, &args, &opts.tol_real(), opts.max_terms, p) {
        Ok(e) => e,
        Err(Error::MissingParameter(name)) => {
            report.diagnostic = Some(format!("{name} required"));
            return;
        }
        Err(e) => {
            report.diagnostic = Some(e.to_string());
            return;
        }
    };
    match (&eval.lhs, &eval.rhs) {
        (Ok(l), Ok(r)) => fill_real(report, l, r, expected, p),
        _ => {
            let mut notes = Vec::new();
            let mut precondition = false;
            for (side, res) in [("lhs", &eval.lhs), ("rhs", &eval.rhs)] {
                match res {
                    Ok(s) => {
                        let (value, tail) = (s.value.with_precision(p).to_decimal_string(), s.tail_bound.to_decimal_digits(6));
                        if side == "lhs" {
                            report.lhs = Some(value);
                            report.lhs_tail = Some(tail);
                            report.lhs_terms = Some(s.terms_used);
                            report.lhs_method = Some(s.method);
                        } else {
                            report.rhs = Some(value);
                            report.rhs_tail = Some(tail);
                            report.rhs_terms = Some(s.terms_used);
                            report.rhs_method = Some(s.method);
                        }
                    }
                    Err(e) => {
                        precondition |= is_precondition(e);
                        if let Error::NoConvergence { terms, .. } = e {
                            if side == "lhs" {
                                report.lhs_terms = Some(*terms);
                            } else {
                                report.rhs_terms = Some(*terms);
                            }
                        }
                        notes.push(format!("{side}: {e}"));
                    }
                }
            }
            report.status = if precondition { Status::Skipped } else { mismatch_status(expected) };
            report.diagnostic = Some(notes.join("; "));
        }
    }
}

fn check_required(spec: &IdentitySpec, params: &IdentityParams) -> Option<String> {
    spec.required_params.iter().find(|p| !params.contains(p)).map(|p| format!("{p} required"))
}

fn verify_spec(spec: &IdentitySpec, params: &IdentityParams, draw: Option<usize>, opts: &VerifyOptions) -> VerificationReport {
    let start = Instant::now();
    let exact = opts.rational && spec.family == Family::Terminating;
    let tag = if exact { "exact".to_string() } else { precision_tag(opts.precision) };
    let mut report = VerificationReport::blank(&spec.id, spec.family, spec.expected_status, tag);
    report.params = params.to_strings();
    report.draw = draw;
    if let Err(e) = opts.validate() {
        report.diagnostic = Some(e.to_string());
    } else if let Some(missing) = check_required(spec, params) {
        report.diagnostic = Some(missing);
    } else {
        match spec.evaluator() {
            Evaluator::Terminating(t) => run_terminating(&mut report, t, params, opts, spec.expected_status),
            Evaluator::Series(s) => run_series(&mut report, s, params, opts, spec.expected_status),
        }
    }
    report.wall_time_us = start.elapsed().as_micros() as u64;
    report
}

/// Verifies one identity at the given parameters. Only an unknown id is an
/// error; every other problem is recorded in the report.
pub fn verify(catalog: &Catalog, id: &str, params: &IdentityParams, opts: &VerifyOptions) -> Result<VerificationReport> {
    let spec = catalog.get(id)?;
    Ok(verify_spec(spec, params, None, opts))
}

/// Verifies a terminating identity at every committed parameter draw.
pub fn verify_draws(catalog: &Catalog, id: &str, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    verify_draws_from(catalog, id, opts, &committed_draws()?)
}

/// As [`verify_draws`] with an explicit draw set.
pub fn verify_draws_from(catalog: &Catalog, id: &str, opts: &VerifyOptions, set: &DrawSet) -> Result<Vec<VerificationReport>> {
    let spec = catalog.get(id)?;
    let draws = set.params(id)?;
    let mut out: Vec<VerificationReport> =
        draws.par_iter().enumerate().map(|(i, p)| verify_spec(spec, p, Some(i), opts)).collect();
    out.sort_by_key(|r| r.draw);
    Ok(out)
}

/// Runs every entry that matches `filter`. Terminating entries run at all
/// committed draws; the others at their catalog defaults overridden by
/// `overrides`. Reports are sorted by id, then draw.
pub fn verify_all(catalog: &Catalog, filter: &Filter, overrides: &IdentityParams, opts: &VerifyOptions) -> Vec<VerificationReport> {
    verify_all_from(catalog, filter, overrides, opts, committed_draws().ok().as_ref())
}

/// As [`verify_all`] with an explicit draw set.
pub fn verify_all_from(
    catalog: &Catalog,
    filter: &Filter,
    overrides: &IdentityParams,
    opts: &VerifyOptions,
    draws: Option<&DrawSet>,
) -> Vec<VerificationReport> {
    let mut jobs: Vec<(&IdentitySpec, IdentityParams, Option<usize>)> = Vec::new();
    for spec in catalog.filter(filter) {
        if spec.family == Family::Terminating && overrides.is_empty() {
            match draws.and_then(|d| d.params(&spec.id).ok()) {
                Some(points) => jobs.extend(points.into_iter().enumerate().map(|(i, p)| (spec, p, Some(i)))),
                None => jobs.push((spec, IdentityParams::new(), None)),
            }
        } else {
            jobs.push((spec, overrides.or_defaults(&spec.default_params()), None));
        }
    }
    let mut out: Vec<VerificationReport> = jobs.par_iter().map(|(s, p, d)| verify_spec(s, p, *d, opts)).collect();
    out.sort_by(|a, b| a.id.cmp(&b.id).then(a.draw.cmp(&b.draw)));
    out
}

/// One report per base `q`, in the given order.
pub fn sweep_q(
    catalog: &Catalog,
    id: &str,
    qs: &[RBig],
    params: &IdentityParams,
    opts: &VerifyOptions,
) -> Result<Vec<VerificationReport>> {
    let spec = catalog.get(id)?;
    if !spec.is_q_identity() {
        return Err(Error::InvalidArgument(format!("`{id}` does not depend on q")));
    }
    let base = params.or_defaults(&spec.default_params());
    Ok(qs
        .par_iter()
        .map(|q| {
            let mut p = base.clone();
            p.set_rational("q", q.clone());
            verify_spec(spec, &p, None, opts)
        })
        .collect())
}

/// A q-series and the classical series it tends to as `q -> 1`, with the
/// factor `kappa(q)` such that `lhs_q ~ kappa(q) lhs_classical`.
#[derive(Clone, Copy, Debug)]
pub struct LimitPair {
    pub key: &'static str,
    pub q_identity: InfiniteIdentity,
    pub classical: InfiniteIdentity,
    scale: Scale,
}

#[derive(Clone, Copy, Debug)]
enum Scale {
    Const(i64),
    /// `(1 - q^2) / 8`
    GapOverEight,
}

impl LimitPair {
    pub fn scale(&self, q: &BigReal) -> BigReal {
        let p = q.precision_bits();
        match self.scale {
            Scale::Const(c) => BigReal::from_i64(c, p),
            Scale::GapOverEight => (BigReal::one(p) - &(q.clone() * q)) * &BigReal::from_ratio(1, 8, p),
        }
    }
}

pub const LIMIT_PAIRS: [LimitPair; 5] = [
    LimitPair { key: "pair-2.7-2.3", q_identity: InfiniteIdentity::Eq27, classical: InfiniteIdentity::Eq23, scale: Scale::Const(-1) },
    LimitPair { key: "pair-2.8-2.4", q_identity: InfiniteIdentity::Eq28, classical: InfiniteIdentity::Eq24, scale: Scale::Const(-2) },
    LimitPair { key: "pair-2.9-2.5", q_identity: InfiniteIdentity::Eq29, classical: InfiniteIdentity::Eq25, scale: Scale::Const(-1) },
    LimitPair { key: "pair-2.10-2.6", q_identity: InfiniteIdentity::Eq210, classical: InfiniteIdentity::Eq26, scale: Scale::GapOverEight },
    LimitPair {
        key: "pair-2.10c-2.6",
        q_identity: InfiniteIdentity::Eq210Corrected,
        classical: InfiniteIdentity::Eq26,
        scale: Scale::GapOverEight,
    },
];

pub fn limit_pair(key: &str) -> Result<LimitPair> {
    LIMIT_PAIRS.into_iter().find(|p| p.key == key).ok_or_else(|| Error::UnknownPair(key.to_string()))
}

/// Default ladder `j = 3..=8`, i.e. `q = 1 - 2^-j`.
pub const DEFAULT_LADDER: [u32; 6] = [3, 4, 5, 6, 7, 8];

/// Evaluates the q-side at `q = 1 - 2^-j` for each `j` and compares with
/// the classical side after removing `kappa(q)`.
pub fn limit_study(pair_key: &str, ladder: &[u32], opts: &VerifyOptions) -> Result<LimitStudy> {
    let pair = limit_pair(pair_key)?;
    opts.validate()?;
    let p = opts.precision;
    let tol = opts.tol_real();
    let classical = eval_lhs(pair.classical, &InfiniteArgs::default(), &tol, opts.max_terms, p)?;
    let rungs: Vec<(Rung, Option<BigReal>)> = ladder
        .par_iter()
        .map(|&j| {
            let q_exact = RBig::ONE - RBig::from_parts(1u8.into(), dashu_int::UBig::ONE << j as usize);
            let q = BigReal::from_rational(&q_exact, p);
            let scale = pair.scale(&q);
            let mut rung = Rung {
                j,
                q: Exact::new(q_exact).to_string(),
                lhs_q: None,
                scale: Some(scale.to_decimal_digits(12)),
                error: None,
                terms: None,
                diagnostic: None,
            };
            match eval_lhs(pair.q_identity, &InfiniteArgs::with_q(q), &tol, opts.max_terms, p) {
                Ok(s) => {
                    let err = (s.value.checked_div(&scale).expect("nonzero scale") - &classical.value).abs();
                    rung.lhs_q = Some(s.value.to_decimal_digits(20));
                    rung.error = Some(err.to_decimal_digits(6));
                    rung.terms = Some(s.terms_used);
                    (rung, Some(err))
                }
                Err(e) => {
                    rung.diagnostic = Some(e.to_string());
                    (rung, None)
                }
            }
        })
        .collect();
    let errors: Vec<Option<BigReal>> = rungs.iter().map(|(_, e)| e.clone()).collect();
    let verdict = if errors.len() < 3 {
        Verdict::InsufficientRungs
    } else {
        let last = &errors[errors.len() - 3..];
        let decreasing = last.windows(2).all(|w| match (&w[0], &w[1]) {
            (Some(x), Some(y)) => y < x,
            _ => false,
        });
        if decreasing {
            Verdict::Decreasing
        } else {
            Verdict::NotDecreasing
        }
    };
    Ok(LimitStudy {
        pair: pair.key.to_string(),
        q_identity: pair.q_identity.key().to_string(),
        classical_identity: pair.classical.key().to_string(),
        precision: precision_tag(p),
        lhs_classical: classical.value.to_decimal_digits(20),
        rungs: rungs.into_iter().map(|(r, _)| r).collect(),
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_loads_and_resolves() {
        let c = Catalog::load().unwrap();
        assert!(c.entries().len() >= 20);
        for e in c.entries() {
            let _ = e.evaluator();
        }
    }

    #[test]
    fn catalog_rejects_unknown_ids() {
        let text = r#"
            [[identity]]
            id = "eq9.9"
            family = "terminating"
            citation = "x"
            required_params = []
            constraints = "none"
            expected_status = "verified"
        "#;
        assert!(matches!(Catalog::from_toml(text), Err(Error::Catalog(_))));
    }

    #[test]
    fn filter_parsing() {
        let f = Filter::parse(["family=infinite_q", "status=suspect"]).unwrap();
        let c = Catalog::load().unwrap();
        let ids: Vec<&str> = c.filter(&f).iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, ["eq2.10", "eq2.8"]);
        assert!(Filter::parse(["colour=red"]).is_err());
        assert!(Filter::parse(["family=odd"]).is_err());
    }

    #[test]
    fn missing_q_is_skipped() {
        let c = Catalog::load().unwrap();
        let r = verify(&c, "eq1.3", &IdentityParams::new(), &VerifyOptions::default()).unwrap();
        assert_eq!(r.status, Status::Skipped);
        assert_eq!(r.diagnostic.as_deref(), Some("q required"));
    }

    #[test]
    fn unknown_pair() {
        assert!(matches!(limit_study("pair-9", &DEFAULT_LADDER, &VerifyOptions::default()), Err(Error::UnknownPair(_))));
    }

    #[test]
    fn short_ladder_is_insufficient() {
        let s = limit_study("pair-2.7-2.3", &[3], &VerifyOptions::default()).unwrap();
        assert_eq!(s.rungs.len(), 1);
        assert_eq!(s.verdict, Verdict::InsufficientRungs);
    }
}

use piq_core::numerics::parse_rational;
use piq_core::registry::*;

const MANIFEST: [&str; 29] = [
    "dougall-7f6",
    "eq1.1a",
    "eq1.1b",
    "eq1.2",
    "eq1.3",
    "eq2.1",
    "eq2.10",
    "eq2.10-corrected",
    "eq2.2",
    "eq2.3",
    "eq2.4",
    "eq2.5",
    "eq2.6",
    "eq2.7",
    "eq2.7-corrected",
    "eq2.8",
    "eq2.8-corrected",
    "eq2.9",
    "eq2.9-corrected",
    "eq3.1",
    "eq3.2",
    "eq3.3",
    "eq4.1",
    "eq4.1-truncated",
    "eq4.2",
    "eq5.2",
    "euler-zeta2",
    "lemma5.1",
    "ramanujan",
];

fn catalog() -> Catalog {
    Catalog::load().unwrap()
}

fn params(pairs: &[&str]) -> IdentityParams {
    IdentityParams::parse_pairs(pairs.iter().copied()).unwrap()
}

fn opts() -> VerifyOptions {
    VerifyOptions::default()
}

#[test]
fn catalog_matches_frozen_manifest() {
    assert_eq!(catalog().ids(), MANIFEST);
}

#[test]
fn suspect_entries_are_flagged() {
    let c = catalog();
    let suspect: Vec<&str> =
        c.entries().iter().filter(|e| e.expected_status == ExpectedStatus::Suspect).map(|e| e.id.as_str()).collect();
    assert_eq!(suspect, ["eq2.10", "eq2.8"]);
}

#[test]
fn committed_draws_regenerate_from_seed() {
    let committed = committed_draws().unwrap();
    let fresh = generate_draws(DRAW_SEED, DRAWS_PER_IDENTITY);
    assert_eq!(committed, fresh);
    for tid in TerminatingId::ALL {
        let rows = committed.params(tid.key()).unwrap();
        assert_eq!(rows.len(), DRAWS_PER_IDENTITY);
        assert!(rows.iter().all(|p| (1..=6).contains(&p.n().unwrap())));
    }
}

#[test]
fn pi_cubed_series_passes() {
    let mut o = opts();
    o.max_terms = 5000;
    let r = verify(&catalog(), "eq2.1", &IdentityParams::new(), &o).unwrap();
    assert_eq!(r.status, Status::Pass, "{r:?}");
    assert!(r.lhs.as_deref().unwrap().starts_with("2.153213658354154178852521879"));
}

#[test]
fn closed_forms_match_independent_digits() {
    // mpmath at 40 digits
    let cases = [
        ("eq2.3", "-1.439028024720355048843690390"),
        ("eq2.4", "-5.568659473085270706578305560"),
        ("eq2.5", "2.349582592505601520135595496"),
        ("eq2.6", "1.642311115316065612314717630"),
        ("eq1.1b", "-9.256006121163263014616418729"),
        ("ramanujan", "1.273239544735162686151070106"),
    ];
    let c = catalog();
    for (id, digits) in cases {
        let r = verify(&c, id, &IdentityParams::new(), &opts()).unwrap();
        assert_eq!(r.status, Status::Pass, "{id}");
        assert!(r.rhs.as_deref().unwrap().starts_with(digits), "{id}: {:?}", r.rhs);
    }
}

#[test]
fn jackson_rational_instance_is_exact() {
    let mut o = opts();
    o.rational = true;
    let p = params(&["q=1/2", "a=1/4", "b=1/2", "c=1/3", "d=1/5", "n=2"]);
    let r = verify(&catalog(), "eq5.2", &p, &o).unwrap();
    assert_eq!(r.status, Status::Pass);
    assert_eq!(r.precision, "exact");
    assert_eq!(r.abs_residual.as_deref(), Some("0"));
}

#[test]
fn balance_violation_is_skipped() {
    let p = params(&["q=1/2", "a=1/4", "b=1/2", "c=1/3", "d=1/5", "e=1/7", "n=2"]);
    let r = verify(&catalog(), "eq5.2", &p, &opts()).unwrap();
    assert_eq!(r.status, Status::Skipped);
    assert!(r.diagnostic.unwrap().contains("balancing"));
}

#[test]
fn divergent_entry_is_recorded_not_crashed() {
    let r = verify(&catalog(), "eq2.10", &params(&["q=1/2"]), &opts()).unwrap();
    assert_eq!(r.status, Status::Mismatch);
    assert!(r.diagnostic.is_some());
}

#[test]
fn unknown_id_is_an_error() {
    assert!(verify(&catalog(), "eq7.7", &IdentityParams::new(), &opts()).is_err());
}

#[test]
fn terminating_family_passes_exactly() {
    let mut o = opts();
    o.rational = true;
    let f = Filter::parse(["family=terminating"]).unwrap();
    let reports = verify_all(&catalog(), &f, &IdentityParams::new(), &o);
    assert_eq!(reports.len(), 8 * DRAWS_PER_IDENTITY);
    assert!(reports.iter().all(|r| r.status == Status::Pass && r.abs_residual.as_deref() == Some("0")));
}

#[test]
fn terminating_family_passes_in_floating_point() {
    let f = Filter::parse(["family=terminating"]).unwrap();
    let reports = verify_all(&catalog(), &f, &IdentityParams::new(), &opts());
    let bad: Vec<_> = reports.iter().filter(|r| r.status != Status::Pass).collect();
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn classical_family_passes() {
    let f = Filter::parse(["family=infinite_classical"]).unwrap();
    let reports = verify_all(&catalog(), &f, &IdentityParams::new(), &opts());
    assert_eq!(reports.len(), 10);
    assert!(reports.iter().all(|r| r.status == Status::Pass));
}

#[test]
fn empty_filter_match_is_empty() {
    let f = Filter::parse(["id=nothing"]).unwrap();
    assert!(verify_all(&catalog(), &f, &IdentityParams::new(), &opts()).is_empty());
}

#[test]
fn reports_are_sorted_and_deterministic() {
    let f = Filter::parse(["family=infinite_q"]).unwrap();
    let a = verify_all(&catalog(), &f, &IdentityParams::new(), &opts());
    let b = verify_all(&catalog(), &f, &IdentityParams::new(), &opts());
    let ids: Vec<&str> = a.iter().map(|r| r.id.as_str()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.without_timing().to_json(), y.without_timing().to_json());
    }
}

#[test]
fn json_round_trips_byte_for_byte() {
    let c = catalog();
    for id in ["eq2.1", "eq2.10", "eq1.3"] {
        let r = verify(&c, id, &params(&["q=3/10"]), &opts()).unwrap();
        let text = r.to_json();
        let back: VerificationReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_json(), text);
    }
}

#[test]
fn looser_tolerance_keeps_pass_with_fewer_terms() {
    let c = catalog();
    for id in ["eq2.1", "eq1.3", "eq2.2"] {
        let p = params(&["q=1/2"]);
        let tight = verify(&c, id, &p, &opts()).unwrap();
        let mut o = opts();
        o.tol = parse_rational("1e-29").unwrap();
        let loose = verify(&c, id, &p, &o).unwrap();
        assert_eq!(tight.status, Status::Pass);
        assert_eq!(loose.status, Status::Pass);
        assert!(loose.terms_used() <= tight.terms_used(), "{id}");
    }
}

#[test]
fn sweep_over_five_bases() {
    let qs: Vec<_> = ["0.1", "0.3", "0.5", "0.7", "0.9"].iter().map(|q| parse_rational(q).unwrap()).collect();
    let reports = sweep_q(&catalog(), "eq1.3", &qs, &IdentityParams::new(), &opts()).unwrap();
    assert_eq!(reports.len(), 5);
    assert!(reports.iter().all(|r| r.status == Status::Pass), "{reports:?}");
    assert!(sweep_q(&catalog(), "eq1.3", &[], &IdentityParams::new(), &opts()).unwrap().is_empty());
    assert!(sweep_q(&catalog(), "eq2.1", &qs, &IdentityParams::new(), &opts()).is_err());
}

#[test]
fn convergence_slows_near_one() {
    let qs = [parse_rational("0.5").unwrap(), parse_rational("0.99").unwrap()];
    let r = sweep_q(&catalog(), "eq2.2", &qs, &IdentityParams::new(), &opts()).unwrap();
    assert_eq!(r[1].status, Status::Pass, "{:?}", r[1]);
    assert!(r[1].terms_used() > r[0].terms_used());
}

#[test]
fn limit_studies_decay() {
    for pair in ["pair-2.7-2.3", "pair-2.9-2.5", "pair-2.10c-2.6"] {
        let s = limit_study(pair, &DEFAULT_LADDER, &opts()).unwrap();
        assert_eq!(s.rungs.len(), 6);
        assert_eq!(s.verdict, Verdict::Decreasing, "{s:?}");
    }
}

#[test]
fn divergent_pair_is_not_decreasing() {
    let s = limit_study("pair-2.10-2.6", &DEFAULT_LADDER, &opts()).unwrap();
    assert_eq!(s.verdict, Verdict::NotDecreasing);
    assert!(s.rungs.iter().all(|r| r.diagnostic.is_some()));
}

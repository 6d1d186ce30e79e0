use piq_core::harmonics::harmonic;
use piq_core::qkernel::{pochhammer, q_integer, q_pochhammer, q_pochhammer_inf, QParams};
use piq_core::series::terminating::term_7f6;
use piq_core::series::{sum_adaptive, TailModel, TermStream};
use piq_core::{BigReal, Exact, Jet2, Scalar};
use proptest::prelude::*;

const P: usize = 192;

fn rational() -> impl Strategy<Value = Exact> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| Exact::from_ratio(n, d))
}

fn base() -> impl Strategy<Value = Exact> {
    (2i64..=16).prop_flat_map(|d| (1..d).prop_map(move |n| Exact::from_ratio(n, d)))
}

fn real(x: &Exact) -> BigReal {
    x.to_real(P)
}

fn close(x: &BigReal, y: &BigReal, rel_bits: isize) -> bool {
    let scale = BigReal::max_of(&BigReal::one(P), &BigReal::max_of(&x.abs(), &y.abs()));
    (x.clone() - y).abs() <= scale * &BigReal::pow2(-rel_bits, P)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn pochhammer_recurrence(x in rational(), n in 0usize..12) {
        let lhs = pochhammer(&x, n + 1);
        let rhs = pochhammer(&x, n) * (x.clone() + &Exact::from_int(n as i64));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn q_pochhammer_recurrence(x in rational(), q in base(), n in 0usize..12) {
        let qp = QParams::new(q.clone()).unwrap();
        let lhs = q_pochhammer(&x, &qp, n + 1);
        let rhs = q_pochhammer(&x, &qp, n) * (Exact::from_int(1) - x.clone() * &qp.power(n as i64));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn finite_product_is_ratio_of_infinite(x in (-9i64..=9, 2i64..=9), q in base(), n in 0usize..10) {
        let x = Exact::from_ratio(x.0, x.1);
        let qp = QParams::new(real(&q)).unwrap();
        let xr = real(&x);
        prop_assume!(!xr.is_zero());
        let eps = BigReal::pow2(-150, P);
        let shifted = xr.clone() * &qp.power(n as i64);
        let full = q_pochhammer_inf(&xr, &qp, &eps);
        let tail = q_pochhammer_inf(&shifted, &qp, &eps);
        // a vanishing factor is legitimate when x = q^-m
        if let (Ok(full), Ok(tail)) = (full, tail) {
            let ratio = full.value.checked_div(&tail.value).unwrap();
            let finite = q_pochhammer(&xr, &qp, n);
            let bound = (full.bound.clone() + &tail.bound) * &BigReal::from_i64(4, P) * &BigReal::max_of(&ratio.abs(), &finite.abs())
                + &BigReal::pow2(-170, P);
            prop_assert!((ratio - &finite).abs() <= bound);
        }
    }

    #[test]
    fn q_integer_is_geometric_sum(q in base(), n in 1i64..30) {
        let qp = QParams::new(q.clone()).unwrap();
        let mut sum = Exact::from_int(0);
        for i in 0..n {
            sum = sum + qp.power(i);
        }
        prop_assert_eq!(q_integer(n, &qp).unwrap(), sum);
    }

    #[test]
    fn q_integer_tends_to_n(n in 1i64..40, j in 4u32..40) {
        // q = 1 - 2^-j; 0 <= n - [n] <= n(n-1)/2 * (1 - q)
        let gap = Exact::from_ratio(1, 1i64 << j.min(40));
        let q = Exact::from_int(1) - gap.clone();
        let qn = q_integer(n, &QParams::new(q).unwrap()).unwrap();
        let diff = Exact::from_int(n) - qn;
        prop_assert!(diff.sign() != std::cmp::Ordering::Less);
        prop_assert!(diff <= Exact::from_int(n * (n - 1) / 2) * gap);
    }

    #[test]
    fn harmonic_step(k in 0usize..20, x in rational()) {
        let next = harmonic(k + 1, &x);
        let prev = harmonic(k, &x);
        if let (Ok(next), Ok(prev)) = (next, prev) {
            let step = (x.clone() + &Exact::from_int(k as i64 + 1)).recip().unwrap();
            prop_assert_eq!(next, prev + step);
        }
    }

    #[test]
    fn jet_ring_laws(a in rational(), b in rational(), c in rational(), d in rational(), e in rational(), f in rational()) {
        let x = Jet2::new(a.clone(), b.clone(), c.clone());
        let y = Jet2::new(d.clone(), e.clone(), f.clone());
        let p = x.clone() * &y;
        prop_assert_eq!(&p.d1, &(a.clone() * &e + b.clone() * &d));
        prop_assert_eq!(&p.d2, &(a.clone() * &f + Exact::from_int(2) * b.clone() * &e + c.clone() * &d));
        prop_assert_eq!(p, y.clone() * &x);
        let z = Jet2::new(e.clone(), a.clone(), d.clone());
        prop_assert_eq!(x.clone() * &(y.clone() + &z), x.clone() * &y + x.clone() * &z);
        if !d.is_zero() {
            let back = (x.clone() * &y).checked_div(&y).unwrap();
            prop_assert_eq!(back, x);
        }
    }

    #[test]
    fn looser_tolerance_never_needs_more_terms(num in 1i64..9, den in 10i64..20, t in 10isize..120) {
        let r = BigReal::from_ratio(num, den, P);
        let run = |tol: &BigReal| {
            let r2 = r.clone();
            let s = TermStream::new(0, TailModel::Ratio(r.clone()), move |k| r2.powi(k as i64));
            sum_adaptive(s, tol, 100_000).unwrap().terms_used
        };
        let tight = BigReal::pow2(-t, P);
        let loose = tight.clone() * &BigReal::from_i64(10, P);
        prop_assert!(run(&loose) <= run(&tight));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn jet_derivatives_match_finite_differences(a in 1i64..30, b in 1i64..30, c in -20i64..20, n in 1usize..5, k in 0usize..5) {
        prop_assume!(k <= n);
        let (a, b, c) = (BigReal::from_ratio(a, 7, P), BigReal::from_ratio(b, 11, P), BigReal::from_ratio(2 * c + 1, 13, P));
        let f = |bb: &BigReal| term_7f6(&a, bb, &c, n, k);
        let jet = term_7f6(&Jet2::constant(a.clone()), &Jet2::variable(b.clone()), &Jet2::constant(c.clone()), n, k);
        prop_assume!(jet.is_ok());
        let jet = jet.unwrap();
        let h = BigReal::pow2(-(P as isize) / 4, P);
        let (up, mid, down) = (f(&(b.clone() + &h)), f(&b), f(&(b.clone() - &h)));
        prop_assume!(up.is_ok() && down.is_ok());
        let (up, mid, down) = (up.unwrap(), mid.unwrap(), down.unwrap());
        let d1 = (up.clone() - &down).checked_div(&(h.clone() * &BigReal::from_i64(2, P))).unwrap();
        let d2 = (up - &(mid * &BigReal::from_i64(2, P)) + &down).checked_div(&(h.clone() * &h)).unwrap();
        // truncation error is O(h^2) = 2^-96; rounding in d2 is 2^-96 too
        prop_assert!(close(&jet.d1, &d1, 80), "{:?} vs {:?}", jet.d1, d1);
        prop_assert!(close(&jet.d2, &d2, 80), "{:?} vs {:?}", jet.d2, d2);
    }
}

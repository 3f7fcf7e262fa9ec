use circlab::combinatorics::{card_a2ps, count, h_pk, EnumerationCaps, Family};
use circlab::ensemble::{spectrum, trace_power, CirculantSample, TraceMethod};
use circlab::experiments::report::fmt_machine;
use circlab::experiments::batch_count;
use circlab::limit_theory::{limit_cov, wick_moment, CovQuery, TheoryMode};
use circlab::MatrixKind;
use proptest::prelude::*;

fn kind() -> impl Strategy<Value = MatrixKind> {
    prop_oneof![Just(MatrixKind::Rc), Just(MatrixKind::Sc)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn card_a2ps_is_symmetric_and_counts(n in 1u64..7, p in 1u64..4, s0 in 0i64..3) {
        let s = s0.min(p as i64 - 1);
        let a = card_a2ps(n, p, s).unwrap();
        prop_assert_eq!(&a, &card_a2ps(n, p, -s).unwrap());
        let c = count(Family::A2ps { s }, n as u32, 2 * p as usize, &EnumerationCaps::default()).unwrap();
        prop_assert_eq!(a, c.into());
    }

    #[test]
    fn h_is_symmetric(p in 2u32..8, k0 in 0u32..8) {
        let k = k0 % (p + 1);
        prop_assert_eq!(h_pk(p, k).unwrap(), h_pk(p, p - k).unwrap());
    }

    #[test]
    fn trace_methods_agree(kind in kind(), n in 1usize..13, p in 1u32..5,
                           raw in prop::collection::vec(-3.0f64..3.0, 13)) {
        let s = CirculantSample::from_labels(kind, n, 1.0, &raw).unwrap();
        let sp = trace_power(&s, p, TraceMethod::Spectral).unwrap();
        let de = trace_power(&s, p, TraceMethod::Dense).unwrap();
        prop_assert!((sp - de).abs() <= 1e-8 * sp.abs().max(de.abs()).max(1.0));
    }

    #[test]
    fn rc_eigenvalues_pair_up(n in 2usize..40, raw in prop::collection::vec(-3.0f64..3.0, 40)) {
        let s = CirculantSample::from_labels(MatrixKind::Rc, n, 1.0, &raw).unwrap();
        let ev = spectrum(&s).eigenvalues;
        for k in 1..n {
            if 2 * k != n {
                prop_assert_eq!(ev[k], -ev[n - k]);
            }
        }
    }

    #[test]
    fn univariate_wick_is_double_factorial(m in 0u32..8, t in 0.1f64..3.0) {
        let dfact: f64 = (1..2 * m).step_by(2).map(f64::from).product();
        let got = wick_moment(&[vec![t]], &[2 * m]).unwrap();
        prop_assert!((got - dfact * t.powi(m as i32)).abs() <= 1e-9 * got.abs().max(1.0));
        prop_assert_eq!(wick_moment(&[vec![t]], &[2 * m + 1]).unwrap(), 0.0);
    }

    #[test]
    fn equal_time_limits_are_symmetric(kind in kind(), p in 2u32..6, q in 2u32..6, t in 0.1f64..2.0) {
        for mode in [TheoryMode::PaperLiteral, TheoryMode::Reconciled] {
            let a = limit_cov(&CovQuery::new(kind, p, q, t, t).unwrap(), mode).unwrap();
            let b = limit_cov(&CovQuery::new(kind, q, p, t, t).unwrap(), mode).unwrap();
            prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
        }
    }

    #[test]
    fn sc_mixed_parity_vanishes(p in 2u32..7, dq in 0u32..3, s in 0.1f64..1.0, dt in 0.0f64..1.0) {
        let q = p + 2 * dq + 1;
        for mode in [TheoryMode::PaperLiteral, TheoryMode::Reconciled] {
            let v = limit_cov(&CovQuery::new(MatrixKind::Sc, p, q, s, s + dt).unwrap(), mode).unwrap();
            prop_assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn batch_count_is_ceil_sqrt(r in 1usize..1_000_000) {
        let b = batch_count(r);
        prop_assert!(b * b >= r);
        prop_assert!(b == 1 || (b - 1) * (b - 1) < r);
    }

    #[test]
    fn machine_floats_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(fmt_machine(x).parse::<f64>().unwrap(), x);
    }
}

use logmaj::major::{
    complete_to_majorization, gauge_eval, hoelder_gauge, log_majorize, majorize, weak_log_majorize, weak_majorize,
    MajorizationVerdict, NormSpec, SpectrumVector, Tolerance,
};
use proptest::prelude::*;

fn descending(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn sv(v: Vec<f64>) -> SpectrumVector {
    SpectrumVector::from_unsorted(v).unwrap()
}

/// `(a, b)` with `a ≺_w b`: `b` averaged toward its mean, then lowered entrywise.
fn weakly_majorized_pair(len: usize, nonnegative: bool) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    let lo = if nonnegative { 0.0 } else { -5.0 };
    (
        prop::collection::vec(lo..5.0, len),
        0.0..1.0f64,
        prop::collection::vec(0.0..1.0f64, len),
    )
        .prop_map(move |(b, pull, drops)| {
            let b = descending(b);
            let mean = b.iter().sum::<f64>() / b.len() as f64;
            let a: Vec<f64> = b
                .iter()
                .zip(&drops)
                .map(|(x, r)| {
                    let y = (1.0 - pull) * x + pull * mean;
                    if nonnegative {
                        y * (1.0 - r)
                    } else {
                        y - r
                    }
                })
                .collect();
            (descending(a), b)
        })
}

fn with_zeros(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![3 => 0.01..10.0f64, 1 => Just(0.0)], len).prop_map(descending)
}

fn shipped_gauges(d: usize) -> Vec<NormSpec> {
    let mut g: Vec<NormSpec> = (1..=d).map(NormSpec::KyFan).collect();
    g.extend([NormSpec::Operator, NormSpec::TraceNorm, NormSpec::Schatten(1.5), NormSpec::Schatten(2.0), NormSpec::Schatten(4.0)]);
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn log_predicates_match_linear_predicates_on_logs(a in with_zeros(4), b in with_zeros(4)) {
        let (a, b) = (sv(a), sv(b));
        let (la, lb) = (a.log().unwrap(), b.log().unwrap());
        let tol = Tolerance::Absolute(1e-9);
        prop_assert_eq!(
            weak_log_majorize(&a, &b, tol).unwrap().verdict,
            weak_majorize(&la, &lb, tol).unwrap().verdict
        );
        prop_assert_eq!(
            log_majorize(&a, &b, tol).unwrap().verdict,
            majorize(&la, &lb, tol).unwrap().verdict
        );
    }

    #[test]
    fn convex_monotone_maps_preserve_weak_majorization(
        (a, b) in weakly_majorized_pair(5, false),
        alpha in -3.0..3.0f64,
    ) {
        let (a, b) = (sv(a), sv(b));
        prop_assert!(weak_majorize(&a, &b, Tolerance::Auto).unwrap().holds());
        let hinge = move |x: f64| (x + alpha).max(0.0);
        let r = weak_majorize(&a.map(f64::exp).unwrap(), &b.map(f64::exp).unwrap(), Tolerance::Auto).unwrap();
        prop_assert!(r.holds(), "{:?}", r);
        let r = weak_majorize(&a.map(hinge).unwrap(), &b.map(hinge).unwrap(), Tolerance::Auto).unwrap();
        prop_assert!(r.holds(), "{:?}", r);
    }

    #[test]
    fn square_preserves_weak_majorization_on_nonnegatives((a, b) in weakly_majorized_pair(5, true)) {
        let sq = |x: f64| x * x;
        let r = weak_majorize(&sv(a).map(sq).unwrap(), &sv(b).map(sq).unwrap(), Tolerance::Auto).unwrap();
        prop_assert!(r.holds(), "{:?}", r);
    }

    #[test]
    fn gauges_are_monotone_under_weak_majorization((a, b) in weakly_majorized_pair(4, true)) {
        let (a, b) = (sv(a), sv(b));
        for g in shipped_gauges(4) {
            let (ga, gb) = (gauge_eval(&g, &a).unwrap(), gauge_eval(&g, &b).unwrap());
            prop_assert!(ga <= gb + 1e-12 * gb.max(1.0), "{}: {} > {}", g, ga, gb);
        }
    }

    #[test]
    fn hoelder_margin_is_nonnegative(
        vs in prop::collection::vec(prop::collection::vec(0.0..5.0f64, 4), 3),
        k in 1usize..=4,
    ) {
        let r = hoelder_gauge(&NormSpec::KyFan(2), &vs, &[0.2, 0.3, 0.5]).unwrap();
        prop_assert!(r.margin >= -1e-12 * r.rhs.max(1.0), "{:?}", r);
        let r = hoelder_gauge(&NormSpec::KyFan(k), &vs, &[0.2, 0.3, 0.5]).unwrap();
        prop_assert!(r.margin >= -1e-12 * r.rhs.max(1.0), "{:?}", r);
    }

    #[test]
    fn completion_is_valid((a, b) in weakly_majorized_pair(5, false)) {
        let c = complete_to_majorization(&a, &b).unwrap();
        prop_assert!(c.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(a.iter().zip(&c).all(|(x, y)| x <= y));
        prop_assert!(majorize(&sv(c), &sv(b), Tolerance::Auto).unwrap().holds());
    }
}

#[test]
fn hoelder_is_tight_for_equal_vectors_and_single_factor() {
    let v = vec![3.0, 1.0, 0.5];
    let r = hoelder_gauge(&NormSpec::Schatten(3.0), &[v.clone(), v.clone()], &[0.4, 0.6]).unwrap();
    assert!(r.margin.abs() < 1e-14);
    let r = hoelder_gauge(&NormSpec::KyFan(2), &[v], &[1.0]).unwrap();
    assert_eq!(r.margin, 0.0);
}

#[test]
fn minus_infinity_conventions() {
    let r = weak_log_majorize(&sv(vec![1.0, 0.0]), &sv(vec![2.0, 0.0]), Tolerance::Auto).unwrap();
    assert!(r.holds());
    assert_eq!(r.partial_margins[1], 0.0);
    assert!(log_majorize(&sv(vec![1.0, 0.0]), &sv(vec![2.0, 0.0]), Tolerance::Auto).unwrap().holds());
    let r = log_majorize(&sv(vec![1.0, 1.0]), &sv(vec![2.0, 0.0]), Tolerance::Auto).unwrap();
    assert_eq!(r.verdict, MajorizationVerdict::FailsAtK(2));
}

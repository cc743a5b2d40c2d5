use logmaj::ineq::{alt_log_majorization, alt_norm_check, classical_alt_check, MatrixFamily, Verdict};
use logmaj::major::NormSpec;
use logmaj::measure::{build_quadrature, ThetaRule};
use logmaj::random::{haar_unitary, seeded_rng, wishart_family};
use proptest::prelude::*;

fn family(seed: u64, n: usize, d: usize) -> MatrixFamily {
    MatrixFamily::new(wishart_family(&mut seeded_rng(seed, 0), n, d)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quadrature_mass_is_one(theta in 0.0..0.95f64, exponent in 6i32..=10) {
        let tol = 10f64.powi(-exponent);
        let q = build_quadrature(theta, tol).unwrap();
        prop_assert!((q.weight_sum() + q.tail_mass - 1.0).abs() < 1e-12);
        prop_assert!(q.tail_mass <= q.tail_bound);
        prop_assert!(q.tail_bound < tol / 10.0);
        prop_assert!(q.nodes.iter().zip(q.nodes.iter().rev()).all(|(a, b)| (a + b).abs() < 1e-12));
    }

    #[test]
    fn scaling_shifts_both_sides_equally(seed in any::<u64>(), c in 0.1..10.0f64) {
        let f = family(seed, 3, 3);
        let rule = ThetaRule::new(0.4, 1e-8).unwrap();
        let base = alt_norm_check(&f, &rule, &NormSpec::Operator).unwrap();
        let scaled = alt_norm_check(&f.scale(c).unwrap(), &rule, &NormSpec::Operator).unwrap();
        prop_assert!((scaled.lhs - base.lhs - 3.0 * c.ln()).abs() < 1e-10);
        prop_assert!((scaled.margin - base.margin).abs() < 1e-10);
    }

    #[test]
    fn common_unitary_leaves_reports_unchanged(seed in any::<u64>()) {
        let f = family(seed, 3, 3);
        let u = haar_unitary(&mut seeded_rng(seed, 1), 3);
        let rule = ThetaRule::new(0.6, 1e-8).unwrap();
        for norm in [NormSpec::Operator, NormSpec::KyFan(2), NormSpec::TraceNorm] {
            let a = alt_norm_check(&f, &rule, &norm).unwrap();
            let b = alt_norm_check(&f.conjugate_by(&u).unwrap(), &rule, &norm).unwrap();
            prop_assert!((a.margin - b.margin).abs() < 1e-10);
            prop_assert!((a.lhs - b.lhs).abs() < 1e-10);
        }
    }

    #[test]
    fn log_majorization_instances_satisfy_the_chain(seed in any::<u64>()) {
        let r = alt_log_majorization(&family(seed, 3, 3), &ThetaRule::new(0.5, 1e-8).unwrap()).unwrap();
        prop_assert!(r.chain.statements().iter().all(|&s| s), "{:?}", r.chain.statements());
        prop_assert_eq!(r.verdict(), Verdict::Holds);
    }

    #[test]
    fn classical_form_is_monotone_in_theta(seed in any::<u64>()) {
        let f = family(seed, 2, 3);
        let [a1, a2] = f.matrices() else { unreachable!() };
        let lhs: Vec<f64> = [0.25, 0.5, 0.75, 1.0]
            .iter()
            .map(|&t| classical_alt_check(a1, a2, t).unwrap().lhs)
            .collect();
        prop_assert!(lhs.windows(2).all(|w| w[0] <= w[1] + 1e-12), "{:?}", lhs);
    }
}

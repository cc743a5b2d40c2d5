use num_complex::Complex64;

use super::{
    clamped_singular_values, extended_mean, finite_range, fp_allowance, log_gauge, panel_estimate,
    InequalityReport, MatrixFamily, SideCheck, TestFunction, TraceEntry, Verdict,
};
use crate::error::{Error, Result};
use crate::major::{
    implication_chain, majorize, ChainReport, MajorizationReport, NormSpec, SpectrumVector, Tolerance,
};
use crate::measure::{build_quadrature, integral_log_spectra, ThetaRule};
use crate::spectral::{matrix_abs, matrix_exp, matrix_log, operator_norm, psd_power, psd_power_real, PsdMatrix};

use super::function::ConvexityClass;

/// Tolerance on the determinant identity, per dimension.
const DETERMINANT_TOL: f64 = 1e-8;
/// Allowed excess of `‖G(it)‖` over 1.
const ISOMETRY_TOL: f64 = 1e-10;

struct ScalarIntegral {
    value: f64,
    quad_budget: f64,
    trace: Vec<TraceEntry>,
}

/// Probability-weighted integral over the rule's nodes with its
/// quadrature error allowance `tail_bound · range + |fine - coarse|`.
fn integrate_scalar<F>(rule: &ThetaRule, integrand: F) -> Result<ScalarIntegral>
where
    F: Fn(f64) -> Result<f64>,
{
    let nodes = rule.nodes();
    let weights = rule.probability_weights();
    let fine: Vec<f64> = nodes.iter().map(|&t| integrand(t)).collect::<Result<_>>()?;
    let value = extended_mean(&fine, &weights);
    let coarse = match rule {
        ThetaRule::PointMass => value,
        ThetaRule::Quadrature(_) => {
            let values: Vec<f64> = rule.coarse_nodes().iter().map(|&t| integrand(t)).collect::<Result<_>>()?;
            extended_mean(&values, &rule.coarse_probability_weights())
        }
    };
    let quad_budget = rule.tail_bound() * finite_range(&fine) + panel_estimate(value, coarse);
    let trace = nodes
        .iter()
        .zip(&weights)
        .zip(&fine)
        .map(|((&t, &weight), &v)| TraceEntry {
            t,
            weight,
            values: vec![v],
        })
        .collect();
    Ok(ScalarIntegral {
        value,
        quad_budget,
        trace,
    })
}

fn require_theta(rule: &ThetaRule) -> Result<f64> {
    let theta = rule.theta();
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::BadTheta(theta));
    }
    Ok(theta)
}

fn report_from(lhs: f64, integral: ScalarIntegral, dim: usize) -> InequalityReport {
    let budget = integral.quad_budget + fp_allowance(dim, &[lhs, integral.value]);
    let mut report = InequalityReport::new(lhs, integral.value, budget);
    report.trace = integral.trace;
    report
}

/// `log Φ(|∏ A_l^θ|^{1/θ}) ≤ ∫ log Φ(∏ A_l^{1+it}) dβ_θ(t)`.
///
/// For three matrices the variant with the phase on the middle factor only,
/// `∫ log Φ(A_1 A_2^{1+it} A_3) dβ_θ`, is evaluated as a side check.
pub fn alt_norm_check(family: &MatrixFamily, rule: &ThetaRule, norm: &NormSpec) -> Result<InequalityReport> {
    let theta = require_theta(rule)?;
    let d = family.dim();
    norm.validate(d)?;
    let lhs = log_gauge(norm, &family.theta_spectrum(theta)?)?;
    let integral = integrate_scalar(rule, |t| log_gauge(norm, &family.node_spectrum(t)?))?;
    let mut report = report_from(lhs, integral, d);
    if family.len() == 3 {
        let [a1, a2, a3] = family.matrices() else { unreachable!() };
        let middle = integrate_scalar(rule, |t| {
            let m = &(a1.as_complex() * &psd_power(a2, Complex64::new(1.0, t))?) * a3.as_complex();
            log_gauge(norm, &clamped_singular_values(&m)?)
        })?;
        let budget = middle.quad_budget + fp_allowance(d, &[lhs, middle.value]);
        report
            .side_checks
            .push(SideCheck::new("middle-factor phase", lhs, middle.value, budget));
    }
    Ok(report)
}

/// Two-matrix form `‖(A_1^{θ/2} A_2^θ A_1^{θ/2})^{1/θ}‖ ≤ ‖A_1^{1/2} A_2 A_1^{1/2}‖`
/// in the log domain, evaluated directly without quadrature.
pub fn classical_alt_check(a1: &PsdMatrix, a2: &PsdMatrix, theta: f64) -> Result<InequalityReport> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::BadTheta(theta));
    }
    if a1.dim() != a2.dim() {
        return Err(Error::DimensionMismatch(a1.dim(), a2.dim()));
    }
    let sandwich_top = |outer: f64, inner: f64| -> Result<f64> {
        let o = psd_power(a1, Complex64::new(outer, 0.0))?;
        let i = psd_power(a2, Complex64::new(inner, 0.0))?;
        let m = PsdMatrix::certify((&(&o * &i) * &o).hermitian_part())?;
        Ok(m.lambda_max().ln())
    };
    let lhs = sandwich_top(theta / 2.0, theta)? / theta;
    let rhs = sandwich_top(0.5, 1.0)?;
    Ok(InequalityReport::new(lhs, rhs, fp_allowance(a1.dim(), &[lhs, rhs])))
}

#[derive(Clone, Debug, PartialEq)]
pub struct LogMajorizationReport {
    /// `log λ(|∏ A_l^θ|^{1/θ})`.
    pub lhs: SpectrumVector,
    /// `∫ log σ(∏ A_l^{1+it}) dβ_θ(t)`.
    pub rhs: SpectrumVector,
    pub error_budget: f64,
    /// Strong majorization of `lhs` by `rhs` at tolerance `error_budget`.
    pub majorization: MajorizationReport,
    /// Prefix margins recomputed as operator-norm margins of the compound families.
    pub compound_margins: Vec<f64>,
    pub side_checks: Vec<SideCheck>,
    pub chain: ChainReport,
    pub trace: Vec<TraceEntry>,
}

impl LogMajorizationReport {
    pub fn verdict(&self) -> Verdict {
        let prefix = Verdict::classify(self.majorization.min_margin(), self.error_budget);
        let total = Verdict::classify(-self.majorization.full_margin().abs(), self.error_budget);
        let chain = if self.chain.statements().iter().all(|&s| s) {
            Verdict::Holds
        } else {
            Verdict::Violated
        };
        Verdict::worst([prefix, total, chain].into_iter().chain(self.side_checks.iter().map(|c| c.verdict)))
    }
}

fn prefix_sums(v: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    v.iter()
        .map(|&x| {
            acc = if acc == f64::NEG_INFINITY { acc } else { acc + x };
            acc
        })
        .collect()
}

/// Equality check `|a - b| ≤ budget`, reported with margin `-|a - b|`.
fn equality_check(name: &str, a: f64, b: f64, budget: f64) -> SideCheck {
    let mut check = SideCheck::new(name, a, b, budget);
    check.margin = -check.margin.abs();
    check.verdict = Verdict::classify(check.margin, budget);
    check
}

/// Log-majorization `log λ(|∏ A_l^θ|^{1/θ}) ≺ ∫ log σ(∏ A_l^{1+it}) dβ_θ(t)`
/// with the determinant identity, the compound-matrix route for every
/// prefix and the implication chain evaluated alongside.
pub fn alt_log_majorization(family: &MatrixFamily, rule: &ThetaRule) -> Result<LogMajorizationReport> {
    let theta = require_theta(rule)?;
    let d = family.dim();
    let lhs_spectrum = family.theta_spectrum(theta)?;
    let lhs = lhs_spectrum.log()?;

    let nodes = rule.nodes();
    let weights = rule.probability_weights();
    let samples: Vec<SpectrumVector> = nodes.iter().map(|&t| family.node_spectrum(t)).collect::<Result<_>>()?;
    let rhs = integral_log_spectra(&samples, &weights)?;
    let coarse = match rule {
        ThetaRule::PointMass => rhs.clone(),
        ThetaRule::Quadrature(_) => {
            let coarse_samples: Vec<SpectrumVector> = rule
                .coarse_nodes()
                .iter()
                .map(|&t| family.node_spectrum(t))
                .collect::<Result<_>>()?;
            integral_log_spectra(&coarse_samples, &rule.coarse_probability_weights())?
        }
    };

    let fine_prefix = prefix_sums(rhs.values());
    let coarse_prefix = prefix_sums(coarse.values());
    let panel = fine_prefix
        .iter()
        .zip(&coarse_prefix)
        .map(|(&f, &c)| panel_estimate(f, c))
        .fold(0.0, f64::max);
    let node_prefixes: Vec<Vec<f64>> = samples
        .iter()
        .map(|s| prefix_sums(&s.log_values().expect("singular values are non-negative")))
        .collect();
    let range = (0..d)
        .map(|k| finite_range(&node_prefixes.iter().map(|p| p[k]).collect::<Vec<_>>()))
        .fold(0.0, f64::max);
    let lhs_prefix = prefix_sums(lhs.values());
    let mut scale_values = lhs_prefix.clone();
    scale_values.extend_from_slice(&fine_prefix);
    let error_budget = rule.tail_bound() * range + panel + fp_allowance(d, &scale_values);

    let majorization = majorize(&lhs, &rhs, Tolerance::Absolute(error_budget))?;

    let mut side_checks = Vec::new();
    let log_det = family.log_det();
    let det_tol = DETERMINANT_TOL * d as f64;
    side_checks.push(equality_check("determinant lhs", lhs_prefix[d - 1], log_det, det_tol));
    side_checks.push(equality_check("determinant rhs", fine_prefix[d - 1], log_det, det_tol));

    let mut compound_margins = Vec::with_capacity(d);
    for k in 1..=d {
        let compound = alt_norm_check(&family.compound(k)?, rule, &NormSpec::Operator)?;
        let prefix_margin = majorization.partial_margins[k - 1];
        side_checks.push(equality_check(
            &format!("compound route k={k}"),
            compound.margin,
            prefix_margin,
            compound.error_budget + error_budget,
        ));
        compound_margins.push(compound.margin);
    }

    let chain = implication_chain(&lhs_spectrum, &samples, &weights, Tolerance::Absolute(error_budget))?;
    let trace = nodes
        .iter()
        .zip(&weights)
        .zip(&samples)
        .map(|((&t, &weight), s)| TraceEntry {
            t,
            weight,
            values: s.log_values().expect("non-negative"),
        })
        .collect();
    Ok(LogMajorizationReport {
        lhs,
        rhs,
        error_budget,
        majorization,
        compound_margins,
        side_checks,
        chain,
        trace,
    })
}

/// Norm inequality for `f` applied to both sides, in the log domain
/// (`∫ log Φ(f(·))`) for log-log convex `f` and the linear domain
/// (`∫ Φ(f(·))`) for geometrically convex `f`.
fn function_report(
    lhs_spectrum: &SpectrumVector,
    family: &MatrixFamily,
    rule: &ThetaRule,
    function: &TestFunction,
    norm: &NormSpec,
) -> Result<InequalityReport> {
    let d = family.dim();
    norm.validate(d)?;
    let log_domain = match function.class() {
        ConvexityClass::LogLogConvex => true,
        ConvexityClass::GeomConvex => false,
        ConvexityClass::Convex => {
            return Err(Error::BadFunction(format!(
                "{function} needs a log-log or geometric convexity class here"
            )))
        }
    };
    let side = |spectrum: &SpectrumVector| -> Result<f64> {
        let value = function.gauge_of(norm, spectrum)?;
        Ok(if log_domain { value.ln() } else { value })
    };
    let lhs = side(lhs_spectrum)?;
    let integral = integrate_scalar(rule, |t| side(&family.node_spectrum(t)?))?;
    Ok(report_from(lhs, integral, d))
}

/// `f` applied to `|∏ A_l^θ|^{1/θ}` against `f` applied to `|∏ A_l^{1+it}|`.
pub fn corollary_function_check(
    family: &MatrixFamily,
    rule: &ThetaRule,
    function: &TestFunction,
    norm: &NormSpec,
) -> Result<InequalityReport> {
    let theta = require_theta(rule)?;
    function_report(&family.theta_spectrum(theta)?, family, rule, function, norm)
}

/// `log tr |∏ A_l^θ|^{q/θ} ≤ ∫ log tr |∏ A_l^{1+it}|^q dβ_θ(t)`.
pub fn trace_power_check(family: &MatrixFamily, rule: &ThetaRule, q: f64) -> Result<InequalityReport> {
    if q == 0.0 || !q.is_finite() {
        return Err(Error::BadFunction(format!("trace power exponent {q}")));
    }
    if q < 0.0 && !family.is_definite() {
        return Err(Error::SingularNegativePower);
    }
    corollary_function_check(family, rule, &TestFunction::power(q)?, &NormSpec::TraceNorm)
}

fn exp_of_log_sum(family: &MatrixFamily) -> Result<PsdMatrix> {
    if !family.is_definite() {
        return Err(Error::SingularLog);
    }
    let mut logs = family.matrices().iter().map(matrix_log);
    let mut sum = logs.next().expect("non-empty family")?;
    for l in logs {
        sum = &sum + &l?;
    }
    matrix_exp(&sum.hermitian_part())
}

/// Limit `θ → 0`: `exp(Σ log A_l)` on the left, integrals against `β_0` on
/// the right. For two matrices `tr e^{H_1 + H_2} ≤ tr(e^{H_1} e^{H_2})` is
/// evaluated as a side check.
pub fn gt_limit_check(
    family: &MatrixFamily,
    rule: &ThetaRule,
    function: &TestFunction,
    norm: &NormSpec,
) -> Result<InequalityReport> {
    if rule.theta() != 0.0 {
        return Err(Error::BadTheta(rule.theta()));
    }
    let limit = exp_of_log_sum(family)?;
    let mut report = function_report(limit.eigenvalues(), family, rule, function, norm)?;
    if let [a1, a2] = family.matrices() {
        let lhs = limit.eigenvalues().values().iter().sum::<f64>();
        let rhs = (a1.as_complex() * a2.as_complex()).trace().re;
        report.side_checks.push(SideCheck::new(
            "golden-thompson",
            lhs,
            rhs,
            fp_allowance(family.dim(), &[lhs, rhs]),
        ));
    }
    Ok(report)
}

/// Operator-norm distance `‖|∏ A_l^θ|^{1/θ} - exp(Σ log A_l)‖` for each θ.
pub fn lie_trotter_residual(family: &MatrixFamily, thetas: &[f64]) -> Result<Vec<(f64, f64)>> {
    let target = exp_of_log_sum(family)?;
    thetas
        .iter()
        .map(|&theta| {
            if !(theta > 0.0 && theta <= 1.0) {
                return Err(Error::BadTheta(theta));
            }
            let product = family.power_product(Complex64::new(theta, 0.0))?;
            let approx = psd_power_real(&matrix_abs(&product)?, 1.0 / theta)?;
            let residual = operator_norm(&(approx.as_complex() - target.as_complex()))?;
            Ok((theta, residual))
        })
        .collect()
}

/// Three-line bound for `G(z) = ∏ A_l^z`:
/// `log ‖G(θ)‖ ≤ (1-θ) ∫ log ‖G(it)‖ dβ_{1-θ} + θ ∫ log ‖G(1+it)‖ dβ_θ`,
/// keeping both boundary terms, with `‖G(it)‖ ≤ 1` checked at every node.
pub fn hirschman_check(family: &MatrixFamily, theta: f64, quad_tol: f64) -> Result<InequalityReport> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::BadTheta(theta));
    }
    let d = family.dim();
    let left_rule = ThetaRule::Quadrature(build_quadrature(1.0 - theta, quad_tol)?);
    let right_rule = ThetaRule::Quadrature(build_quadrature(theta, quad_tol)?);
    let log_norm = |z: Complex64| -> Result<f64> { Ok(operator_norm(&family.power_product(z)?)?.ln()) };

    let lhs = log_norm(Complex64::new(theta, 0.0))?;
    let left = integrate_scalar(&left_rule, |t| log_norm(Complex64::new(0.0, t)))?;
    let right = integrate_scalar(&right_rule, |t| log_norm(Complex64::new(1.0, t)))?;
    let rhs = combine(1.0 - theta, left.value, theta, right.value);
    let budget =
        (1.0 - theta) * left.quad_budget + theta * right.quad_budget + fp_allowance(d, &[lhs, rhs]);

    let boundary_max = left
        .trace
        .iter()
        .map(|e| e.values[0].exp())
        .fold(0.0, f64::max);
    let mut report = InequalityReport::new(lhs, rhs, budget);
    report
        .side_checks
        .push(SideCheck::new("boundary isometry", boundary_max, 1.0, ISOMETRY_TOL));
    report.trace = left
        .trace
        .into_iter()
        .map(|mut e| {
            e.values.insert(0, 0.0);
            e
        })
        .chain(right.trace.into_iter().map(|mut e| {
            e.values.insert(0, 1.0);
            e
        }))
        .collect();
    Ok(report)
}

/// `a·x + b·y` in the extended reals, with `0·(-inf) = 0`.
fn combine(a: f64, x: f64, b: f64, y: f64) -> f64 {
    let term = |c: f64, v: f64| if c == 0.0 { 0.0 } else { c * v };
    term(a, x) + term(b, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{haar_unitary, seeded_rng, singular_wishart, wishart, wishart_family};

    const TOL: f64 = 1e-8;

    fn rule(theta: f64) -> ThetaRule {
        ThetaRule::new(theta, TOL).unwrap()
    }

    fn diag_family(diags: &[&[f64]]) -> MatrixFamily {
        MatrixFamily::new(diags.iter().map(|d| PsdMatrix::from_diagonal(d).unwrap()).collect()).unwrap()
    }

    fn random_family(seed: u64, n: usize, d: usize) -> MatrixFamily {
        MatrixFamily::new(wishart_family(&mut seeded_rng(seed, 0), n, d)).unwrap()
    }

    #[test]
    fn commuting_family_has_zero_margin() {
        let f = diag_family(&[&[3.0, 1.0, 0.5], &[0.2, 2.0, 1.0], &[1.5, 0.7, 4.0]]);
        for norm in [NormSpec::Operator, NormSpec::KyFan(2), NormSpec::TraceNorm] {
            let r = alt_norm_check(&f, &rule(0.5), &norm).unwrap();
            assert!(r.margin.abs() <= r.error_budget, "{norm}: {r:?}");
            assert_eq!(r.overall(), Verdict::Holds);
        }
    }

    #[test]
    fn point_mass_gives_exact_equality() {
        let f = random_family(11, 3, 3);
        let r = alt_norm_check(&f, &rule(1.0), &NormSpec::Operator).unwrap();
        assert_eq!(r.margin, 0.0);
        assert_eq!(r.side_checks[0].margin, 0.0);
    }

    #[test]
    fn random_pair_operator_norm() {
        let f = random_family(12, 2, 3);
        let r = alt_norm_check(&f, &rule(0.5), &NormSpec::Operator).unwrap();
        assert!(r.margin >= -r.error_budget);
    }

    #[test]
    fn middle_phase_variant_agrees() {
        let f = random_family(13, 3, 3);
        let r = alt_norm_check(&f, &rule(0.3), &NormSpec::Operator).unwrap();
        let side = &r.side_checks[0];
        assert!((side.rhs - r.rhs).abs() < 1e-10);
        assert_eq!(r.overall(), Verdict::Holds);
    }

    #[test]
    fn classical_alt_on_pairs() {
        let mut rng = seeded_rng(14, 0);
        for _ in 0..10 {
            let a = wishart(&mut rng, 4);
            let b = wishart(&mut rng, 4);
            for theta in [0.25, 0.5, 0.75] {
                assert!(classical_alt_check(&a, &b, theta).unwrap().margin >= -1e-10);
            }
        }
    }

    #[test]
    fn identity_family_log_majorization() {
        let id = PsdMatrix::from_diagonal(&[1.0, 1.0, 1.0]).unwrap();
        let f = MatrixFamily::new(vec![id.clone(), id.clone(), id]).unwrap();
        let r = alt_log_majorization(&f, &rule(0.5)).unwrap();
        assert!(r.lhs.values().iter().all(|&x| x.abs() < 1e-14));
        assert!(r.rhs.values().iter().all(|&x| x.abs() < 1e-14));
        assert_eq!(r.verdict(), Verdict::Holds);
    }

    #[test]
    fn log_majorization_with_determinant_identity() {
        let f = random_family(15, 3, 3);
        let r = alt_log_majorization(&f, &rule(0.3)).unwrap();
        // oracle: determinant of the plain product
        let product = &(f.matrices()[0].as_complex() * f.matrices()[1].as_complex()) * f.matrices()[2].as_complex();
        let det_oracle = product.determinant().norm().ln();
        assert!((r.lhs.values().iter().sum::<f64>() - det_oracle).abs() < 1e-8 * 3.0);
        assert!((r.rhs.values().iter().sum::<f64>() - det_oracle).abs() < 1e-8 * 3.0);
        for (k, m) in r.compound_margins.iter().enumerate() {
            assert!((m - r.majorization.partial_margins[k]).abs() <= 2.0 * r.error_budget);
        }
        assert_eq!(r.verdict(), Verdict::Holds, "{:?}", r.side_checks);
    }

    #[test]
    fn first_prefix_matches_operator_norm_check() {
        let f = random_family(16, 3, 3);
        let lm = alt_log_majorization(&f, &rule(0.5)).unwrap();
        let op = alt_norm_check(&f, &rule(0.5), &NormSpec::Operator).unwrap();
        assert!((lm.majorization.partial_margins[0] - op.margin).abs() < 1e-10);
    }

    #[test]
    fn singular_family_log_majorization() {
        let mut rng = seeded_rng(17, 0);
        let f = MatrixFamily::new(vec![
            singular_wishart(&mut rng, 3, 2).unwrap(),
            wishart(&mut rng, 3),
            wishart(&mut rng, 3),
        ])
        .unwrap();
        let r = alt_log_majorization(&f, &rule(0.5)).unwrap();
        assert_eq!(r.lhs.values()[2], f64::NEG_INFINITY);
        assert_eq!(r.rhs.values()[2], f64::NEG_INFINITY);
        assert_eq!(r.verdict(), Verdict::Holds, "{:?}", r.majorization);
    }

    #[test]
    fn identity_function_matches_norm_check() {
        let f = random_family(18, 3, 3);
        let id = TestFunction::power(1.0).unwrap();
        let a = corollary_function_check(&f, &rule(0.5), &id, &NormSpec::KyFan(2)).unwrap();
        let b = alt_norm_check(&f, &rule(0.5), &NormSpec::KyFan(2)).unwrap();
        assert!((a.margin - b.margin).abs() < 1e-12);
    }

    #[test]
    fn inverse_power_on_commuting_family() {
        let f = diag_family(&[&[3.0, 1.0], &[0.5, 2.0]]);
        let inv = TestFunction::power(-1.0).unwrap();
        let r = corollary_function_check(&f, &rule(0.5), &inv, &NormSpec::TraceNorm).unwrap();
        assert!(r.margin.abs() <= r.error_budget);
    }

    #[test]
    fn log_one_plus_on_random_family() {
        let f = random_family(19, 3, 3);
        let g = TestFunction::log_one_plus(1.0, 1.0).unwrap();
        let r = corollary_function_check(&f, &rule(0.5), &g, &NormSpec::TraceNorm).unwrap();
        assert!(r.margin >= -r.error_budget);
    }

    #[test]
    fn plain_convex_function_is_rejected() {
        let f = random_family(20, 2, 2);
        let h = TestFunction::hinge_shift(0.0).unwrap();
        assert!(matches!(
            corollary_function_check(&f, &rule(0.5), &h, &NormSpec::Operator),
            Err(Error::BadFunction(_))
        ));
    }

    #[test]
    fn trace_power_paths_agree() {
        let f = random_family(21, 3, 3);
        let a = trace_power_check(&f, &rule(0.7), 1.0).unwrap();
        let b = corollary_function_check(&f, &rule(0.7), &TestFunction::power(1.0).unwrap(), &NormSpec::TraceNorm)
            .unwrap();
        assert!((a.margin - b.margin).abs() < 1e-12);
        for q in [0.5, 2.0] {
            let r = trace_power_check(&f, &rule(0.7), q).unwrap();
            assert!(r.margin >= -r.error_budget);
        }
    }

    #[test]
    fn trace_power_commuting_negative() {
        let f = diag_family(&[&[2.0, 1.0, 0.5], &[1.0, 3.0, 2.0]]);
        let r = trace_power_check(&f, &rule(0.7), -1.0).unwrap();
        assert!(r.margin.abs() <= r.error_budget);
    }

    #[test]
    fn trace_power_negative_on_singular_family() {
        let f = diag_family(&[&[2.0, 0.0], &[1.0, 3.0]]);
        assert_eq!(trace_power_check(&f, &rule(0.7), -1.0), Err(Error::SingularNegativePower));
    }

    #[test]
    fn gt_limit_single_matrix() {
        let f = random_family(22, 1, 3);
        let r = gt_limit_check(&f, &rule(0.0), &TestFunction::power(1.0).unwrap(), &NormSpec::TraceNorm).unwrap();
        assert!(r.margin.abs() < 1e-12 + r.error_budget);
    }

    #[test]
    fn gt_limit_commuting_pair() {
        let f = diag_family(&[&[2.0, 1.0, 0.5], &[1.0, 3.0, 2.0]]);
        let r = gt_limit_check(&f, &rule(0.0), &TestFunction::power(1.0).unwrap(), &NormSpec::TraceNorm).unwrap();
        assert!(r.margin.abs() <= r.error_budget);
        let gt = &r.side_checks[0];
        assert!(gt.margin.abs() < 1e-12);
        // commuting: the integrand is constant and equals tr(A_1 A_2)
        assert!((r.rhs.exp() - gt.rhs).abs() < 1e-10);
    }

    #[test]
    fn gt_limit_random_triple() {
        let f = random_family(23, 3, 3);
        let r = gt_limit_check(&f, &rule(0.0), &TestFunction::power(2.0).unwrap(), &NormSpec::Schatten(2.0)).unwrap();
        assert!(r.margin >= -r.error_budget);
    }

    #[test]
    fn gt_limit_requires_definite_and_zero_theta() {
        let f = diag_family(&[&[2.0, 0.0]]);
        let id = TestFunction::power(1.0).unwrap();
        assert_eq!(gt_limit_check(&f, &rule(0.0), &id, &NormSpec::Operator), Err(Error::SingularLog));
        let g = random_family(24, 2, 2);
        assert_eq!(gt_limit_check(&g, &rule(0.5), &id, &NormSpec::Operator), Err(Error::BadTheta(0.5)));
    }

    #[test]
    fn lie_trotter_examples() {
        let f = diag_family(&[&[2.0, 1.0, 0.5], &[1.0, 3.0, 2.0]]);
        for (_, r) in lie_trotter_residual(&f, &[0.5, 0.1]).unwrap() {
            assert!(r < 1e-10);
        }
        let single = random_family(25, 1, 3);
        for (_, r) in lie_trotter_residual(&single, &[0.5, 0.01]).unwrap() {
            assert!(r < 1e-10);
        }
        let pair = random_family(26, 2, 3);
        let res = lie_trotter_residual(&pair, &[0.5, 0.1, 0.01, 0.001]).unwrap();
        assert!(res[3].1 < 1e-3 && res[3].1 < res[0].1);
    }

    #[test]
    fn hirschman_scalar_equality() {
        let f = diag_family(&[&[4.0]]);
        let r = hirschman_check(&f, 0.5, TOL).unwrap();
        assert!((r.lhs - 2f64.ln()).abs() < 1e-14);
        assert!((r.rhs - 2f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn hirschman_commuting_family() {
        let f = diag_family(&[&[3.0, 1.0], &[0.5, 2.0], &[1.0, 4.0]]);
        let r = hirschman_check(&f, 0.4, TOL).unwrap();
        assert!(r.margin >= -r.error_budget);
        assert_eq!(r.overall(), Verdict::Holds);
    }

    #[test]
    fn hirschman_singular_family() {
        let mut rng = seeded_rng(27, 0);
        let f = MatrixFamily::new(vec![
            singular_wishart(&mut rng, 3, 1).unwrap(),
            singular_wishart(&mut rng, 3, 2).unwrap(),
            wishart(&mut rng, 3),
        ])
        .unwrap();
        let r = hirschman_check(&f, 0.5, TOL).unwrap();
        assert!(r.margin >= -r.error_budget);
        assert!(r.side_checks[0].lhs <= 1.0 + 1e-10);
    }

    #[test]
    fn covariance_under_scaling_and_unitaries() {
        let f = random_family(28, 3, 3);
        let base = alt_norm_check(&f, &rule(0.3), &NormSpec::KyFan(2)).unwrap();
        let scaled = alt_norm_check(&f.scale(2.5).unwrap(), &rule(0.3), &NormSpec::KyFan(2)).unwrap();
        assert!((scaled.lhs - base.lhs - 3.0 * 2.5f64.ln()).abs() < 1e-10);
        assert!((scaled.margin - base.margin).abs() < 1e-10);
        let u = haar_unitary(&mut seeded_rng(28, 1), 3);
        let rotated = alt_norm_check(&f.conjugate_by(&u).unwrap(), &rule(0.3), &NormSpec::KyFan(2)).unwrap();
        assert!((rotated.margin - base.margin).abs() < 1e-10);
    }

    #[test]
    fn lhs_grows_with_theta_for_pairs() {
        let f = random_family(29, 2, 4);
        let lhs: Vec<f64> = [0.25, 0.5, 0.75]
            .iter()
            .map(|&t| classical_alt_check(&f.matrices()[0], &f.matrices()[1], t).unwrap().lhs)
            .chain(std::iter::once(classical_alt_check(&f.matrices()[0], &f.matrices()[1], 1.0).unwrap().lhs))
            .collect();
        assert!(lhs.windows(2).all(|w| w[0] <= w[1] + 1e-12), "{lhs:?}");
    }

    #[test]
    fn bad_theta_is_rejected() {
        let f = random_family(30, 2, 2);
        assert_eq!(hirschman_check(&f, 1.0, TOL), Err(Error::BadTheta(1.0)));
        assert_eq!(lie_trotter_residual(&f, &[0.0]), Err(Error::BadTheta(0.0)));
        assert_eq!(
            alt_norm_check(&f, &rule(0.0), &NormSpec::Operator),
            Err(Error::BadTheta(0.0))
        );
    }
}

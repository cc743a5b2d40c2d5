use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::major::{majorize, weak_majorize, MajorizationReport, NormSpec, SpectrumVector, Tolerance};
use crate::measure::{integral_log_spectra, integral_spectra, DiscreteMeasure};
use crate::random::{psd_with_spectrum, simplex_weights, wishart};
use crate::spectral::PsdMatrix;

use super::{extended_mean, fp_allowance, ConvexityClass, InequalityReport, TestFunction, Verdict, DEFAULT_P_GRID};

/// Equivalences between a spectral relation of `A` against a finite family
/// `{B_j, w_j}` and norm inequalities over a class of test functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Characterization {
    /// `λ(A) ≺_w ∫ λ(B)` against `‖f(A)‖ ≤ ∫ ‖f(B)‖`, `f` convex non-decreasing.
    WeakMajorization,
    /// `λ(A) ≺ ∫ λ(B)` against `‖f(A)‖ ≤ ∫ ‖f(B)‖`, `f` convex.
    Majorization,
    /// `λ(A) ≺_{w log} exp ∫ log λ(B)` against the log-convex and
    /// exp-convex non-decreasing function classes.
    WeakLogMajorization,
    /// `λ(A) ≺_log exp ∫ log λ(B)` against `‖f(A)‖ ≤ exp ∫ log ‖f(B)‖`,
    /// `log f(e^x)` convex.
    LogMajorization,
    /// `λ(A) ≺_log exp ∫ log λ(B)` against `‖g(A)‖ ≤ ∫ ‖g(B)‖`,
    /// `g(e^x)` convex. The converse needs every `B_j` invertible.
    LogMajorizationLinear,
}

impl Characterization {
    pub const ALL: [Characterization; 5] = [
        Characterization::WeakMajorization,
        Characterization::Majorization,
        Characterization::WeakLogMajorization,
        Characterization::LogMajorization,
        Characterization::LogMajorizationLinear,
    ];

    fn log_domain(self) -> bool {
        !matches!(self, Characterization::WeakMajorization | Characterization::Majorization)
    }

    fn weak(self) -> bool {
        matches!(self, Characterization::WeakMajorization | Characterization::WeakLogMajorization)
    }
}

impl fmt::Display for Characterization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Characterization::WeakMajorization => "weak",
            Characterization::Majorization => "strong",
            Characterization::WeakLogMajorization => "weaklog",
            Characterization::LogMajorization => "log",
            Characterization::LogMajorizationLinear => "log-linear",
        })
    }
}

impl FromStr for Characterization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Characterization::ALL
            .into_iter()
            .find(|c| c.to_string() == s)
            .ok_or_else(|| Error::BadSpec(format!("unknown characterization `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Relation holds, so every norm inequality of the class must hold.
    Forward,
    /// Norm inequalities on the probing functions hold, so the relation must hold.
    Converse,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "forward",
            Direction::Converse => "converse",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forward" => Ok(Direction::Forward),
            "converse" => Ok(Direction::Converse),
            other => Err(Error::BadSpec(format!("unknown direction `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedReport {
    pub label: String,
    pub report: InequalityReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub relation: Characterization,
    pub direction: Direction,
    pub predicate: MajorizationReport,
    pub checks: Vec<NamedReport>,
    pub all_hold: bool,
    /// The evaluated implication is not contradicted.
    pub consistent: bool,
    /// Label of the most negative failing check.
    pub witness: Option<String>,
}

impl EquivalenceReport {
    /// Check with the smallest margin relative to its budget.
    pub fn tightest(&self) -> Option<&NamedReport> {
        self.checks.iter().min_by(|x, y| {
            let slack = |r: &InequalityReport| r.margin + r.error_budget;
            slack(&x.report).total_cmp(&slack(&y.report))
        })
    }
}

/// One sampled instance: `A`, the atoms `B_j` and their weights.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceInstance {
    pub a: PsdMatrix,
    pub bs: Vec<PsdMatrix>,
    pub measure: DiscreteMeasure,
}

/// Wishart atoms with simplex weights and an `A` whose spectrum is pulled
/// towards the mean of the averaged (log-)spectrum, so the relation holds.
/// With `violate`, `A` is the averaged spectrum itself scaled by `1.1`,
/// which breaks the relation at `k = 1`.
pub fn constructed_instance<R: Rng + ?Sized>(
    rng: &mut R,
    relation: Characterization,
    dim: usize,
    atoms: usize,
) -> Result<EquivalenceInstance> {
    instance(rng, relation, dim, atoms, false)
}

pub fn violated_instance<R: Rng + ?Sized>(
    rng: &mut R,
    relation: Characterization,
    dim: usize,
    atoms: usize,
) -> Result<EquivalenceInstance> {
    instance(rng, relation, dim, atoms, true)
}

fn instance<R: Rng + ?Sized>(
    rng: &mut R,
    relation: Characterization,
    dim: usize,
    atoms: usize,
    violate: bool,
) -> Result<EquivalenceInstance> {
    if dim == 0 || atoms == 0 {
        return Err(Error::MeasureInvalid("empty instance".into()));
    }
    let bs: Vec<PsdMatrix> = (0..atoms).map(|_| wishart(rng, dim)).collect();
    let measure = DiscreteMeasure::new(simplex_weights(rng, atoms))?;
    let spectra: Vec<SpectrumVector> = bs.iter().map(|b| b.eigenvalues().clone()).collect();
    let (pull, scale) = if violate {
        (0.0, 1.1)
    } else if relation.weak() {
        (rng.random_range(0.0..0.5), rng.random_range(0.8..1.0))
    } else {
        (rng.random_range(0.0..0.5), 1.0)
    };
    let toward_mean = |v: &[f64]| -> Vec<f64> {
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        v.iter().map(|x| (1.0 - pull) * x + pull * mean).collect()
    };
    let values: Vec<f64> = if relation.log_domain() {
        let log_mean = integral_log_spectra(&spectra, measure.weights())?;
        toward_mean(log_mean.values())
            .into_iter()
            .map(|x| scale * x.exp())
            .collect()
    } else {
        let mean = integral_spectra(&spectra, measure.weights())?;
        toward_mean(mean.values()).into_iter().map(|x| scale * x).collect()
    };
    let a = psd_with_spectrum(rng, &values)?;
    Ok(EquivalenceInstance { a, bs, measure })
}

fn predicate(relation: Characterization, a: &PsdMatrix, spectra: &[SpectrumVector], weights: &[f64]) -> Result<MajorizationReport> {
    let tol = Tolerance::Auto;
    if relation.log_domain() {
        let lhs = a.eigenvalues().log()?;
        let rhs = integral_log_spectra(spectra, weights)?;
        if relation.weak() {
            weak_majorize(&lhs, &rhs, tol)
        } else {
            majorize(&lhs, &rhs, tol)
        }
    } else {
        let rhs = integral_spectra(spectra, weights)?;
        if relation.weak() {
            weak_majorize(a.eigenvalues(), &rhs, tol)
        } else {
            majorize(a.eigenvalues(), &rhs, tol)
        }
    }
}

/// How a function enters its norm inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Averaging {
    /// `‖f(A)‖ ≤ ∫ ‖f(B)‖`.
    Linear,
    /// `log ‖f(A)‖ ≤ ∫ log ‖f(B)‖`.
    Log,
}

struct Probe {
    function: TestFunction,
    averaging: Averaging,
    norms: Vec<NormSpec>,
}

fn ky_fan_norms(d: usize) -> Vec<NormSpec> {
    (1..=d).map(NormSpec::KyFan).collect()
}

fn forward_norms(d: usize) -> Vec<NormSpec> {
    let mut norms = ky_fan_norms(d);
    norms.push(NormSpec::Schatten(1.0));
    norms.push(NormSpec::Schatten(2.0));
    norms
}

fn convex_library(top: f64, monotone_only: bool) -> Result<Vec<TestFunction>> {
    let mut fs = vec![
        TestFunction::hinge_shift(0.0)?,
        TestFunction::hinge_shift(-0.5 * top)?,
        TestFunction::power_with(2.0, ConvexityClass::Convex)?,
        TestFunction::shifted_power_with(1.0, 2.0, ConvexityClass::Convex)?,
        TestFunction::exp_linear(ConvexityClass::Convex)?,
    ];
    if !monotone_only {
        fs.push(TestFunction::custom("reflect", ConvexityClass::Convex, false, move |x| (top - x).max(0.0))?);
        fs.push(TestFunction::custom("centered-square", ConvexityClass::Convex, false, move |x| {
            (x - 0.5 * top).powi(2)
        })?);
    }
    Ok(fs)
}

fn loglog_library(monotone_only: bool) -> Result<Vec<TestFunction>> {
    let mut fs = vec![
        TestFunction::power(0.5)?,
        TestFunction::power(1.0)?,
        TestFunction::power(2.0)?,
        TestFunction::shifted_power(1.0, 2.0)?,
        TestFunction::exp_linear(ConvexityClass::LogLogConvex)?,
    ];
    if !monotone_only {
        fs.push(TestFunction::power(-0.5)?);
        fs.push(TestFunction::power(-1.0)?);
        fs.push(TestFunction::custom("x+1/x", ConvexityClass::LogLogConvex, false, |x| x + 1.0 / x)?);
    }
    Ok(fs)
}

fn geom_library(monotone_only: bool) -> Result<Vec<TestFunction>> {
    let mut fs = vec![
        TestFunction::log_one_plus(1.0, 1.0)?,
        TestFunction::log_one_plus(2.0, 1.0)?,
        TestFunction::power_with(0.5, ConvexityClass::GeomConvex)?,
        TestFunction::power_with(1.0, ConvexityClass::GeomConvex)?,
        TestFunction::exp_linear(ConvexityClass::GeomConvex)?,
    ];
    if !monotone_only {
        fs.push(TestFunction::power_with(-0.5, ConvexityClass::GeomConvex)?);
        fs.push(TestFunction::power_with(-1.0, ConvexityClass::GeomConvex)?);
        fs.push(TestFunction::custom("x+1/x", ConvexityClass::GeomConvex, false, |x| x + 1.0 / x)?);
    }
    Ok(fs)
}

fn with_averaging(fs: Vec<TestFunction>, averaging: Averaging, norms: &[NormSpec]) -> Vec<Probe> {
    fs.into_iter()
        .map(|function| Probe {
            function,
            averaging,
            norms: norms.to_vec(),
        })
        .collect()
}

fn forward_probes(relation: Characterization, d: usize, top: f64) -> Result<Vec<Probe>> {
    let norms = forward_norms(d);
    Ok(match relation {
        Characterization::WeakMajorization => with_averaging(convex_library(top, true)?, Averaging::Linear, &norms),
        Characterization::Majorization => with_averaging(convex_library(top, false)?, Averaging::Linear, &norms),
        Characterization::WeakLogMajorization => {
            let mut probes = with_averaging(loglog_library(true)?, Averaging::Log, &norms);
            probes.extend(with_averaging(geom_library(true)?, Averaging::Linear, &norms));
            probes
        }
        Characterization::LogMajorization => with_averaging(loglog_library(false)?, Averaging::Log, &norms),
        Characterization::LogMajorizationLinear => with_averaging(geom_library(false)?, Averaging::Linear, &norms),
    })
}

fn converse_probes(relation: Characterization, d: usize, top: f64) -> Result<Vec<Probe>> {
    let ky_fan = ky_fan_norms(d);
    let mut with_trace = ky_fan.clone();
    with_trace.push(NormSpec::TraceNorm);
    let signed_powers = |class: ConvexityClass| -> Result<Vec<TestFunction>> {
        DEFAULT_P_GRID
            .iter()
            .flat_map(|&p| [p, -p])
            .map(|p| TestFunction::power_with(p, class))
            .collect()
    };
    Ok(match relation {
        Characterization::WeakMajorization => {
            with_averaging(vec![TestFunction::hinge_shift(0.0)?], Averaging::Linear, &ky_fan)
        }
        Characterization::Majorization => {
            let mut probes = with_averaging(vec![TestFunction::hinge_shift(0.0)?], Averaging::Linear, &ky_fan);
            let reflect = TestFunction::custom("reflect", ConvexityClass::Convex, false, move |x| (top - x).max(0.0))?;
            probes.extend(with_averaging(vec![reflect], Averaging::Linear, &[NormSpec::TraceNorm]));
            probes
        }
        Characterization::WeakLogMajorization => {
            let powers = DEFAULT_P_GRID.iter().map(|&p| TestFunction::power(p)).collect::<Result<_>>()?;
            let mut probes = with_averaging(powers, Averaging::Log, &ky_fan);
            let logs = [1.0, 1e-2, 1e-4]
                .iter()
                .map(|&eps| TestFunction::log_one_plus(1.0, eps))
                .collect::<Result<_>>()?;
            probes.extend(with_averaging(logs, Averaging::Linear, &ky_fan));
            probes
        }
        Characterization::LogMajorization => {
            with_averaging(signed_powers(ConvexityClass::LogLogConvex)?, Averaging::Log, &with_trace)
        }
        Characterization::LogMajorizationLinear => {
            with_averaging(signed_powers(ConvexityClass::GeomConvex)?, Averaging::Linear, &with_trace)
        }
    })
}

fn evaluate(probe: &Probe, norm: &NormSpec, a: &PsdMatrix, bs: &[PsdMatrix], weights: &[f64]) -> Result<InequalityReport> {
    let f = &probe.function;
    let transform = |v: f64| match probe.averaging {
        Averaging::Linear => v,
        Averaging::Log => v.ln(),
    };
    let lhs = transform(f.gauge_of(norm, a.eigenvalues())?);
    let values = bs
        .iter()
        .map(|b| Ok(transform(f.gauge_of(norm, b.eigenvalues())?)))
        .collect::<Result<Vec<_>>>()?;
    let rhs = extended_mean(&values, weights);
    let mut scale = values.clone();
    scale.push(lhs);
    Ok(InequalityReport::new(lhs, rhs, fp_allowance(a.dim(), &scale)))
}

/// Tests one direction of `relation` on the instance `(A, {B_j}, μ)`.
///
/// Forward: when the relation holds, every shipped function of the class must
/// satisfy its norm inequality for all Ky Fan norms and Schatten 1, 2.
/// Converse: when the probing inequalities hold, the relation must hold.
pub fn equivalence_harness(
    a: &PsdMatrix,
    bs: &[PsdMatrix],
    measure: &DiscreteMeasure,
    relation: Characterization,
    direction: Direction,
) -> Result<EquivalenceReport> {
    if bs.len() != measure.len() {
        return Err(Error::MeasureInvalid(format!("{} atoms but {} weights", bs.len(), measure.len())));
    }
    let d = a.dim();
    if let Some(b) = bs.iter().find(|b| b.dim() != d) {
        return Err(Error::DimensionMismatch(d, b.dim()));
    }
    if relation == Characterization::LogMajorizationLinear
        && direction == Direction::Converse
        && !bs.iter().all(PsdMatrix::is_definite)
    {
        return Err(Error::PrerequisiteViolated(
            "the converse needs every atom to be invertible".into(),
        ));
    }
    let weights = measure.weights();
    let spectra: Vec<SpectrumVector> = bs.iter().map(|b| b.eigenvalues().clone()).collect();
    let predicate = predicate(relation, a, &spectra, weights)?;
    let top = bs.iter().map(PsdMatrix::lambda_max).fold(a.lambda_max(), f64::max).max(1.0);
    let probes = match direction {
        Direction::Forward => forward_probes(relation, d, top)?,
        Direction::Converse => converse_probes(relation, d, top)?,
    };
    let mut checks = Vec::new();
    for probe in &probes {
        for norm in &probe.norms {
            checks.push(NamedReport {
                label: format!("{} {}", probe.function, norm),
                report: evaluate(probe, norm, a, bs, weights)?,
            });
        }
    }
    let all_hold = checks.iter().all(|c| c.report.verdict == Verdict::Holds);
    let witness = checks
        .iter()
        .filter(|c| c.report.verdict != Verdict::Holds)
        .min_by(|x, y| x.report.margin.total_cmp(&y.report.margin))
        .map(|c| c.label.clone());
    let consistent = match direction {
        Direction::Forward => !predicate.holds() || all_hold,
        Direction::Converse => !all_hold || predicate.holds(),
    };
    Ok(EquivalenceReport {
        relation,
        direction,
        predicate,
        checks,
        all_hold,
        consistent,
        witness,
    })
}

//! Verifiers for multivariate norm and trace inequalities, log-majorization
//! relations and their characterizations. Every check returns signed margins
//! together with an error budget instead of a bare boolean.

mod characterize;
mod equivalence;
mod function;
mod multivariate;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::compound::antisym_power_psd;
use crate::error::{Error, Result};
use crate::major::{gauge_eval, signed_margin, NormSpec, SpectrumVector};
use crate::measure::compensated_sum;
use crate::spectral::{psd_power, singular_values, zero_tol, ComplexMatrix, PsdMatrix};

pub use characterize::{
    char_by_power_norms, p_limit_check, p_limit_value, CharMode, CharacterizationReport, GridMargin,
    PLimitReport, DEFAULT_P_GRID,
};
pub use equivalence::{
    constructed_instance, equivalence_harness, violated_instance, Characterization, Direction,
    EquivalenceInstance, EquivalenceReport, NamedReport,
};
pub use function::{ConvexityClass, FunctionKind, TestFunction};
pub use multivariate::{
    alt_log_majorization, alt_norm_check, classical_alt_check, corollary_function_check, gt_limit_check,
    hirschman_check, lie_trotter_residual, trace_power_check, LogMajorizationReport,
};

/// Floating-point allowance per dimension added to every error budget.
pub const FP_ALLOWANCE: f64 = 1e-9;

/// Ordered PSD matrices of a common dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixFamily {
    matrices: Vec<PsdMatrix>,
}

impl MatrixFamily {
    pub fn new(matrices: Vec<PsdMatrix>) -> Result<Self> {
        let first = matrices.first().ok_or(Error::EmptyFamily)?;
        let d = first.dim();
        if let Some(m) = matrices.iter().find(|m| m.dim() != d) {
            return Err(Error::DimensionMismatch(d, m.dim()));
        }
        Ok(Self { matrices })
    }

    pub fn matrices(&self) -> &[PsdMatrix] {
        &self.matrices
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].dim()
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn is_definite(&self) -> bool {
        self.matrices.iter().all(PsdMatrix::is_definite)
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        Self::new(self.matrices.iter().map(|m| m.scale(c)).collect::<Result<_>>()?)
    }

    /// Every member conjugated by the same unitary.
    pub fn conjugate_by(&self, unitary: &ComplexMatrix) -> Result<Self> {
        Self::new(
            self.matrices
                .iter()
                .map(|m| m.conjugate_by(unitary))
                .collect::<Result<_>>()?,
        )
    }

    /// Family of `k`-th antisymmetric powers.
    pub fn compound(&self, k: usize) -> Result<Self> {
        Self::new(
            self.matrices
                .iter()
                .map(|m| antisym_power_psd(m, k))
                .collect::<Result<_>>()?,
        )
    }

    /// `∏ A_l^z` in family order.
    pub fn power_product(&self, z: Complex64) -> Result<ComplexMatrix> {
        let mut factors = self.matrices.iter().map(|a| psd_power(a, z));
        let mut acc = factors.next().expect("non-empty family")?;
        for f in factors {
            acc = &acc * &f?;
        }
        Ok(acc)
    }

    /// Singular values of `∏ A_l^{1+it}`.
    pub fn node_spectrum(&self, t: f64) -> Result<SpectrumVector> {
        clamped_singular_values(&self.power_product(Complex64::new(1.0, t))?)
    }

    /// Eigenvalues of `|∏ A_l^θ|^{1/θ}`.
    pub fn theta_spectrum(&self, theta: f64) -> Result<SpectrumVector> {
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(Error::BadTheta(theta));
        }
        let sigma = clamped_singular_values(&self.power_product(Complex64::new(theta, 0.0))?)?;
        if theta == 1.0 {
            return Ok(sigma);
        }
        sigma.map(|s| s.powf(1.0 / theta))
    }

    /// Sum of `log det A_l`.
    pub fn log_det(&self) -> f64 {
        self.matrices.iter().map(PsdMatrix::log_det).sum()
    }
}

/// Singular values with entries below the rank tolerance set to exactly 0.
pub(crate) fn clamped_singular_values(m: &ComplexMatrix) -> Result<SpectrumVector> {
    let sigma = singular_values(m)?;
    let tol = zero_tol(m.dim(), sigma.values()[0]);
    SpectrumVector::from_descending(sigma.values().iter().map(|&s| if s <= tol { 0.0 } else { s }).collect())
}

/// `log Φ(v)` with `log 0 = -inf`.
pub(crate) fn log_gauge(norm: &NormSpec, v: &SpectrumVector) -> Result<f64> {
    Ok(gauge_eval(norm, v)?.ln())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Holds,
    Inconclusive,
    Violated,
}

impl Verdict {
    /// `holds` iff `margin ≥ -budget`, `violated` iff `margin < -10 budget`.
    pub fn classify(margin: f64, budget: f64) -> Self {
        if margin >= -budget {
            Verdict::Holds
        } else if margin < -10.0 * budget || margin.is_nan() {
            Verdict::Violated
        } else {
            Verdict::Inconclusive
        }
    }

    pub fn worst<I: IntoIterator<Item = Verdict>>(verdicts: I) -> Verdict {
        verdicts.into_iter().max().unwrap_or(Verdict::Holds)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Violated => "violated",
        })
    }
}

impl FromStr for Verdict {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "holds" => Ok(Verdict::Holds),
            "inconclusive" => Ok(Verdict::Inconclusive),
            "violated" => Ok(Verdict::Violated),
            other => Err(Error::BadSpec(format!("unknown verdict `{other}`"))),
        }
    }
}

/// Integrand values at one quadrature node.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceEntry {
    pub t: f64,
    pub weight: f64,
    pub values: Vec<f64>,
}

/// An auxiliary assertion evaluated next to the main inequality.
#[derive(Clone, Debug, PartialEq)]
pub struct SideCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub error_budget: f64,
    pub verdict: Verdict,
}

impl SideCheck {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, error_budget: f64) -> Self {
        let margin = signed_margin(lhs, rhs);
        Self {
            name: name.into(),
            lhs,
            rhs,
            margin,
            error_budget,
            verdict: Verdict::classify(margin, error_budget),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`; equal infinities give 0.
    pub margin: f64,
    pub error_budget: f64,
    /// Verdict of the main inequality alone.
    pub verdict: Verdict,
    pub side_checks: Vec<SideCheck>,
    pub trace: Vec<TraceEntry>,
}

impl InequalityReport {
    pub fn new(lhs: f64, rhs: f64, error_budget: f64) -> Self {
        let margin = signed_margin(lhs, rhs);
        Self {
            lhs,
            rhs,
            margin,
            error_budget,
            verdict: Verdict::classify(margin, error_budget),
            side_checks: Vec::new(),
            trace: Vec::new(),
        }
    }

    /// Worst verdict over the main inequality and all side checks.
    pub fn overall(&self) -> Verdict {
        Verdict::worst(std::iter::once(self.verdict).chain(self.side_checks.iter().map(|c| c.verdict)))
    }

    pub fn holds(&self) -> bool {
        self.overall() == Verdict::Holds
    }
}

/// `1e-9 · d · max(1, |finite sides|)`.
pub(crate) fn fp_allowance(dim: usize, values: &[f64]) -> f64 {
    let scale = values
        .iter()
        .filter(|v| v.is_finite())
        .fold(1.0_f64, |m, v| m.max(v.abs()));
    FP_ALLOWANCE * dim as f64 * scale
}

/// Weighted mean in the extended reals; `+inf` and `-inf` together are NaN.
pub(crate) fn extended_mean(values: &[f64], weights: &[f64]) -> f64 {
    let carried = || values.iter().zip(weights).filter(|(_, &w)| w > 0.0).map(|(&v, _)| v);
    let pos = carried().any(|v| v == f64::INFINITY);
    let neg = carried().any(|v| v == f64::NEG_INFINITY);
    match (pos, neg) {
        (true, true) => f64::NAN,
        (true, false) => f64::INFINITY,
        (false, true) => f64::NEG_INFINITY,
        (false, false) => compensated_sum(carried_terms(values, weights)),
    }
}

fn carried_terms<'a>(values: &'a [f64], weights: &'a [f64]) -> impl Iterator<Item = f64> + 'a {
    values.iter().zip(weights).filter(|(_, &w)| w > 0.0).map(|(v, w)| v * w)
}

/// Range of the finite values.
pub(crate) fn finite_range(values: &[f64]) -> f64 {
    let finite = values.iter().filter(|v| v.is_finite());
    let hi = finite.clone().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    let lo = finite.fold(f64::INFINITY, |m, &v| m.min(v));
    if hi >= lo {
        hi - lo
    } else {
        0.0
    }
}

/// `|fine - coarse|`, 0 for equal infinities.
pub(crate) fn panel_estimate(fine: f64, coarse: f64) -> f64 {
    signed_margin(fine, coarse).abs()
}

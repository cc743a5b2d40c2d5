//! The `β_θ` probability measures on the real line, their Gauss–Legendre
//! discretization with certified tail bounds, and componentwise integrals of
//! (log-)spectra.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::major::SpectrumVector;

/// Gauss–Legendre points per panel of the fine rule.
pub const POINTS_PER_PANEL: usize = 16;
/// Initial panel width on `[-T, T]`.
pub const PANEL_WIDTH: f64 = 0.5;
const MAX_REFINEMENTS: usize = 8;
const MAX_TRUNCATION: f64 = 200.0;

/// Neumaier compensated sum in iteration order.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut carry = 0.0_f64;
    for x in terms {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// `β_θ` for `θ ∈ [0, 1]`; `θ = 1` is the point mass at `t = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaMeasure {
    theta: f64,
}

impl ThetaMeasure {
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::BadTheta(theta));
        }
        Ok(Self { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn is_point_mass(&self) -> bool {
        self.theta == 1.0
    }

    pub fn density(&self, t: f64) -> Result<f64> {
        beta_density(self.theta, t)
    }

    /// Exact mass of `{|t| > T}`.
    pub fn tail_mass(&self, truncation: f64) -> f64 {
        if self.is_point_mass() {
            return 0.0;
        }
        // 1 - tanh(πT/2), without cancellation
        let one_minus_h = 2.0 / ((PI * truncation).exp() + 1.0);
        if self.theta == 0.0 {
            return one_minus_h;
        }
        let h = (PI * truncation / 2.0).tanh();
        let tau = (PI * self.theta / 2.0).tan();
        2.0 / (PI * self.theta) * (tau * one_minus_h / (1.0 + tau * tau * h)).atan()
    }

    /// Analytic upper bound on [`Self::tail_mass`]:
    /// `4 C e^{-πT} / (π κ)` with `C = sin(πθ) / (2θ)` (`π/2` at `θ = 0`) and
    /// `κ = 1 - 2 max(0, -cos πθ) e^{-πT}`. Infinite when `κ ≤ 0`.
    pub fn tail_bound(&self, truncation: f64) -> f64 {
        if self.is_point_mass() {
            return 0.0;
        }
        let c = density_numerator(self.theta);
        let decay = (-PI * truncation).exp();
        let kappa = 1.0 - 2.0 * (-(PI * self.theta).cos()).max(0.0) * decay;
        if kappa <= 0.0 {
            return f64::INFINITY;
        }
        4.0 * c * decay / (PI * kappa)
    }
}

/// `sin(πθ) / (2θ)`, continuously extended by `π/2` at `θ = 0`.
fn density_numerator(theta: f64) -> f64 {
    if theta == 0.0 {
        PI / 2.0
    } else {
        (PI * theta).sin() / (2.0 * theta)
    }
}

/// Density of `β_θ`: `sin(πθ) / (2θ (cosh πt + cos πθ))`, and
/// `π / (2 (cosh πt + 1))` at `θ = 0`.
pub fn beta_density(theta: f64, t: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&theta) {
        return Err(Error::BadTheta(theta));
    }
    if !t.is_finite() {
        return Ok(0.0);
    }
    let cos_term = if theta == 0.0 { 1.0 } else { (PI * theta).cos() };
    Ok(density_numerator(theta) / ((PI * t).cosh() + cos_term))
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite rule on `[-T, T]` built from panels of equal width,
/// weights already multiplied by the density. Nodes are symmetric about 0.
fn composite_rule(theta: f64, truncation: f64, width: f64, points: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let (x, w) = gauss_legendre(points);
    let panels = (truncation / width).round() as usize;
    let half = width / 2.0;
    let mut pos_nodes = Vec::with_capacity(panels * points);
    let mut pos_weights = Vec::with_capacity(panels * points);
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * width;
        for (xi, wi) in x.iter().zip(&w) {
            let t = mid + half * xi;
            pos_nodes.push(t);
            pos_weights.push(half * wi * beta_density(theta, t)?);
        }
    }
    let mut nodes: Vec<f64> = pos_nodes.iter().rev().map(|t| -t).collect();
    let mut weights: Vec<f64> = pos_weights.iter().rev().copied().collect();
    nodes.extend(pos_nodes);
    weights.extend(pos_weights);
    Ok((nodes, weights))
}

/// Truncated Gauss–Legendre discretization of `β_θ` for `θ ∈ [0, 1)`.
///
/// `weights` are rescaled so that they sum to `1 - tail_mass`; the raw
/// discrepancy before rescaling is kept in `mass_error`. A companion rule
/// with half the points per panel on the same panels provides the panel
/// error estimate `|I_fine - I_coarse|`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaQuadrature {
    pub theta: f64,
    pub tol: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub coarse_nodes: Vec<f64>,
    pub coarse_weights: Vec<f64>,
    pub truncation: f64,
    pub panel_width: f64,
    pub points_per_panel: usize,
    pub tail_bound: f64,
    pub tail_mass: f64,
    pub mass_error: f64,
}

pub fn build_quadrature(theta: f64, tol: f64) -> Result<ThetaQuadrature> {
    if !(0.0..1.0).contains(&theta) {
        return Err(Error::BadTheta(theta));
    }
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::BadTol(tol));
    }
    let measure = ThetaMeasure::new(theta)?;
    let mut truncation = PANEL_WIDTH;
    while !(measure.tail_bound(truncation) < tol / 10.0) {
        truncation += PANEL_WIDTH;
        if truncation > MAX_TRUNCATION {
            return Err(Error::BadTol(tol));
        }
    }
    let tail_bound = measure.tail_bound(truncation);
    let tail_mass = measure.tail_mass(truncation);
    let interior = 1.0 - tail_mass;

    let mut width = PANEL_WIDTH;
    for _ in 0..=MAX_REFINEMENTS {
        let (nodes, weights) = composite_rule(theta, truncation, width, POINTS_PER_PANEL)?;
        let (coarse_nodes, coarse_weights) = composite_rule(theta, truncation, width, POINTS_PER_PANEL / 2)?;
        let fine = compensated_sum(weights.iter().copied());
        let coarse = compensated_sum(coarse_weights.iter().copied());
        let mass_error = (fine - interior).abs();
        if mass_error + (fine - coarse).abs() < tol {
            let scale = interior / fine;
            let coarse_scale = interior / coarse;
            return Ok(ThetaQuadrature {
                theta,
                tol,
                nodes,
                weights: weights.iter().map(|w| w * scale).collect(),
                coarse_nodes,
                coarse_weights: coarse_weights.iter().map(|w| w * coarse_scale).collect(),
                truncation,
                panel_width: width,
                points_per_panel: POINTS_PER_PANEL,
                tail_bound,
                tail_mass,
                mass_error,
            });
        }
        width /= 2.0;
    }
    Err(Error::ConvergenceFailure)
}

impl ThetaQuadrature {
    pub fn weight_sum(&self) -> f64 {
        compensated_sum(self.weights.iter().copied())
    }

    /// Weights divided by their sum, so they form a probability vector.
    pub fn normalized_weights(&self) -> Vec<f64> {
        normalize(&self.weights)
    }

    pub fn normalized_coarse_weights(&self) -> Vec<f64> {
        normalize(&self.coarse_weights)
    }

    /// `∫ φ dβ_θ` restricted to `[-T, T]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, phi: F) -> f64 {
        compensated_sum(self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * phi(t)))
    }
}

fn normalize(weights: &[f64]) -> Vec<f64> {
    let total = compensated_sum(weights.iter().copied());
    weights.iter().map(|w| w / total).collect()
}

/// Either the exact point mass (`θ = 1`) or a quadrature of `β_θ`.
#[derive(Clone, Debug, PartialEq)]
pub enum ThetaRule {
    PointMass,
    Quadrature(ThetaQuadrature),
}

impl ThetaRule {
    pub fn new(theta: f64, tol: f64) -> Result<Self> {
        if theta == 1.0 {
            if !(tol > 0.0) || !tol.is_finite() {
                return Err(Error::BadTol(tol));
            }
            Ok(ThetaRule::PointMass)
        } else {
            Ok(ThetaRule::Quadrature(build_quadrature(theta, tol)?))
        }
    }

    pub fn theta(&self) -> f64 {
        match self {
            ThetaRule::PointMass => 1.0,
            ThetaRule::Quadrature(q) => q.theta,
        }
    }

    pub fn nodes(&self) -> &[f64] {
        match self {
            ThetaRule::PointMass => &[0.0],
            ThetaRule::Quadrature(q) => &q.nodes,
        }
    }

    pub fn coarse_nodes(&self) -> &[f64] {
        match self {
            ThetaRule::PointMass => &[0.0],
            ThetaRule::Quadrature(q) => &q.coarse_nodes,
        }
    }

    /// Probability weights at [`Self::nodes`].
    pub fn probability_weights(&self) -> Vec<f64> {
        match self {
            ThetaRule::PointMass => vec![1.0],
            ThetaRule::Quadrature(q) => q.normalized_weights(),
        }
    }

    pub fn coarse_probability_weights(&self) -> Vec<f64> {
        match self {
            ThetaRule::PointMass => vec![1.0],
            ThetaRule::Quadrature(q) => q.normalized_coarse_weights(),
        }
    }

    pub fn tail_bound(&self) -> f64 {
        match self {
            ThetaRule::PointMass => 0.0,
            ThetaRule::Quadrature(q) => q.tail_bound,
        }
    }

    pub fn truncation(&self) -> f64 {
        match self {
            ThetaRule::PointMass => 0.0,
            ThetaRule::Quadrature(q) => q.truncation,
        }
    }
}

/// Probability vector on a finite index set.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure {
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::MeasureInvalid("no atoms".into()));
        }
        if weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::MeasureInvalid("weights must be positive and finite".into()));
        }
        let total = compensated_sum(weights.iter().copied());
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::MeasureInvalid(format!("weights sum to {total}")));
        }
        Ok(Self { weights })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1.0 / n as f64; n])
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

fn check_samples(samples: &[SpectrumVector], weights: &[f64]) -> Result<usize> {
    if samples.len() != weights.len() {
        return Err(Error::LengthMismatch(samples.len(), weights.len()));
    }
    let d = samples
        .first()
        .ok_or_else(|| Error::MeasureInvalid("no samples".into()))?
        .len();
    for s in samples {
        if s.len() != d {
            return Err(Error::LengthMismatch(d, s.len()));
        }
    }
    if weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
        return Err(Error::MeasureInvalid("weights must be non-negative and finite".into()));
    }
    Ok(d)
}

/// Restores descending order after rounding; components are weighted means
/// of ordered values, so any inversion is at the ulp level.
fn repair_order(mut v: Vec<f64>) -> Vec<f64> {
    for i in 1..v.len() {
        if v[i] > v[i - 1] {
            v[i] = v[i - 1];
        }
    }
    v
}

/// Componentwise `Σ_j w_j log λ_i(B_j)`; a `-inf` entry carried by a
/// positive weight makes the component `-inf`.
pub fn integral_log_spectra(samples: &[SpectrumVector], weights: &[f64]) -> Result<SpectrumVector> {
    let d = check_samples(samples, weights)?;
    let logs = samples.iter().map(|s| s.log_values()).collect::<Result<Vec<_>>>()?;
    let out = (0..d)
        .map(|i| {
            let hits_zero = logs
                .iter()
                .zip(weights)
                .any(|(l, &w)| w > 0.0 && l[i] == f64::NEG_INFINITY);
            if hits_zero {
                f64::NEG_INFINITY
            } else {
                compensated_sum(logs.iter().zip(weights).filter(|(_, &w)| w > 0.0).map(|(l, &w)| w * l[i]))
            }
        })
        .collect();
    SpectrumVector::from_descending(repair_order(out))
}

/// Componentwise `Σ_j w_j λ_i(B_j)`.
pub fn integral_spectra(samples: &[SpectrumVector], weights: &[f64]) -> Result<SpectrumVector> {
    let d = check_samples(samples, weights)?;
    let out = (0..d)
        .map(|i| compensated_sum(samples.iter().zip(weights).map(|(s, &w)| w * s.values()[i])))
        .collect();
    SpectrumVector::from_descending(repair_order(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_density_is_sech() {
        for t in [0.0, 0.3, -1.2, 4.0] {
            let sech = 1.0 / (PI * t).cosh();
            assert!((beta_density(0.5, t).unwrap() - sech).abs() < 1e-15);
        }
        assert!((beta_density(0.5, 0.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_density_at_origin() {
        assert!((beta_density(0.0, 0.0).unwrap() - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn density_is_even_and_positive() {
        for theta in [0.0, 0.1, 0.5, 0.9, 0.999] {
            for t in [0.1, 0.7, 2.5] {
                let a = beta_density(theta, t).unwrap();
                assert!(a > 0.0);
                assert_eq!(a, beta_density(theta, -t).unwrap());
            }
        }
    }

    #[test]
    fn density_rejects_bad_theta() {
        assert_eq!(beta_density(1.0, 0.0), Err(Error::BadTheta(1.0)));
        assert_eq!(beta_density(-0.1, 0.0), Err(Error::BadTheta(-0.1)));
    }

    #[test]
    fn density_approaches_limit() {
        let near = beta_density(1e-9, 0.4).unwrap();
        let limit = beta_density(0.0, 0.4).unwrap();
        assert!((near - limit).abs() < 1e-8);
    }

    #[test]
    fn tail_mass_matches_independent_quadrature() {
        // oracle: trapezoid on a fine grid far out to 40
        for theta in [0.0, 0.25, 0.5, 0.9] {
            let m = ThetaMeasure::new(theta).unwrap();
            let t0 = 1.5;
            let h = 1e-4;
            let steps = ((40.0 - t0) / h) as usize;
            let mut acc = 0.0;
            for i in 0..=steps {
                let t = t0 + i as f64 * h;
                let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
                acc += w * beta_density(theta, t).unwrap();
            }
            let oracle = 2.0 * acc * h;
            assert!((m.tail_mass(t0) - oracle).abs() < 1e-9, "theta {theta}");
            assert!(m.tail_bound(t0) >= m.tail_mass(t0));
        }
    }

    #[test]
    fn tail_mass_at_zero_truncation_is_one() {
        for theta in [0.0, 0.3, 0.5, 0.8] {
            assert!((ThetaMeasure::new(theta).unwrap().tail_mass(0.0) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(16);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        let m30: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((m30 - 2.0 / 31.0).abs() < 1e-14);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn quadrature_normalization() {
        for theta in [0.0, 0.1, 0.25, 0.5, 0.75, 0.9] {
            let q = build_quadrature(theta, 1e-8).unwrap();
            assert!((q.weight_sum() + q.tail_bound - 1.0).abs() < 1e-8, "theta {theta}");
            assert!((q.weight_sum() + q.tail_mass - 1.0).abs() < 1e-12);
            assert!(q.weights.iter().all(|&w| w > 0.0));
            let n = q.nodes.len();
            for i in 0..n {
                assert_eq!(q.nodes[i], -q.nodes[n - 1 - i]);
            }
        }
    }

    #[test]
    fn quadrature_rejects_bad_inputs() {
        assert_eq!(build_quadrature(1.0, 1e-8), Err(Error::BadTheta(1.0)));
        assert_eq!(build_quadrature(0.5, 0.0), Err(Error::BadTol(0.0)));
        assert_eq!(build_quadrature(0.5, f64::NAN).unwrap_err().to_string(), Error::BadTol(f64::NAN).to_string());
    }

    #[test]
    fn point_mass_integrates_exactly() {
        let rule = ThetaRule::new(1.0, 1e-8).unwrap();
        assert_eq!(rule.nodes(), &[0.0]);
        assert_eq!(rule.probability_weights(), vec![1.0]);
    }

    #[test]
    fn refinement_is_stable() {
        let coarse = build_quadrature(0.5, 1e-6).unwrap();
        let fine = build_quadrature(0.5, 1e-10).unwrap();
        let phi = |t: f64| (1.0 + t * t).sqrt().min(3.0);
        assert!((coarse.integrate(phi) - fine.integrate(phi)).abs() < 1e-6);
    }

    #[test]
    fn second_moment_at_half() {
        // ∫ t² sech(πt) dt = 1/4
        let q = build_quadrature(0.5, 1e-10).unwrap();
        assert!((q.integrate(|t| t * t) - 0.25).abs() < 1e-8);
    }

    #[test]
    fn log_spectra_examples() {
        let a = SpectrumVector::from_descending(vec![4.0, 1.0]).unwrap();
        let single = integral_log_spectra(std::slice::from_ref(&a), &[1.0]).unwrap();
        assert_eq!(single.values(), &[4f64.ln(), 0.0]);
        let two = integral_log_spectra(&[a.clone(), a.clone()], &[0.5, 0.5]).unwrap();
        assert!((two.values()[0] - 4f64.ln()).abs() < 1e-15);
        assert_eq!(two.values()[1], 0.0);
        let z = SpectrumVector::from_descending(vec![4.0, 0.0]).unwrap();
        let mixed = integral_log_spectra(&[a.clone(), z.clone()], &[0.5, 0.5]).unwrap();
        assert_eq!(mixed.values()[1], f64::NEG_INFINITY);
        let skipped = integral_log_spectra(&[a, z], &[1.0, 0.0]).unwrap();
        assert_eq!(skipped.values()[1], 0.0);
    }

    #[test]
    fn log_spectra_length_mismatch() {
        let a = SpectrumVector::from_descending(vec![1.0]).unwrap();
        assert_eq!(integral_log_spectra(&[a], &[0.5, 0.5]), Err(Error::LengthMismatch(1, 2)));
    }

    #[test]
    fn discrete_measure_validation() {
        assert!(DiscreteMeasure::new(vec![0.25; 4]).is_ok());
        assert!(DiscreteMeasure::new(vec![0.5, 0.6]).is_err());
        assert!(DiscreteMeasure::new(vec![1.5, -0.5]).is_err());
        assert!(DiscreteMeasure::new(vec![]).is_err());
    }
}

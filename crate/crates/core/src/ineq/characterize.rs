use crate::error::{Error, Result};
use crate::major::{log_majorize, signed_margin, weak_log_majorize, MajorizationReport, NormSpec, Tolerance};
use crate::spectral::PsdMatrix;

use super::TestFunction;

/// Exponents probed by the power-norm characterizations; strong mode adds their negatives.
pub const DEFAULT_P_GRID: [f64; 5] = [2.0, 1.0, 0.5, 0.1, 0.02];

const GRID_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharMode {
    /// Weak log-majorization, probed with `p > 0`.
    Weak,
    /// Log-majorization, probed with `p` of both signs.
    Strong,
}

/// `log ‖B^p‖_(k) - log ‖A^p‖_(k)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridMargin {
    pub p: f64,
    pub k: usize,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CharacterizationReport {
    pub mode: CharMode,
    pub predicate: MajorizationReport,
    pub grid: Vec<GridMargin>,
    pub grid_tol: f64,
    pub grid_holds: bool,
    /// The predicate and the grid reach the same conclusion.
    pub agreement: bool,
    /// Most negative grid entry when the grid detects a violation.
    pub witness: Option<GridMargin>,
}

fn probe_exponents(p_grid: &[f64], mode: CharMode) -> Result<Vec<f64>> {
    if let Some(&p) = p_grid.iter().find(|p| !(p.is_finite() && **p != 0.0)) {
        return Err(Error::BadSpec(format!("grid exponent {p}")));
    }
    let mut ps: Vec<f64> = Vec::new();
    for &p in p_grid {
        let p = if mode == CharMode::Strong { p.abs() } else { p };
        if p > 0.0 && !ps.contains(&p) {
            ps.push(p);
        }
    }
    if mode == CharMode::Strong {
        let negatives: Vec<f64> = ps.iter().map(|p| -p).collect();
        ps.extend(negatives);
    }
    Ok(ps)
}

/// Compares `‖A^p‖_(k) ≤ ‖B^p‖_(k)` over `p_grid × [d]` with the direct
/// (weak) log-majorization predicate. A singular side under a negative power
/// has norm `+inf`.
pub fn char_by_power_norms(
    a: &PsdMatrix,
    b: &PsdMatrix,
    p_grid: &[f64],
    mode: CharMode,
) -> Result<CharacterizationReport> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let d = a.dim();
    let predicate = match mode {
        CharMode::Weak => weak_log_majorize(a.eigenvalues(), b.eigenvalues(), Tolerance::Auto)?,
        CharMode::Strong => log_majorize(a.eigenvalues(), b.eigenvalues(), Tolerance::Auto)?,
    };
    let mut grid = Vec::new();
    for p in probe_exponents(p_grid, mode)? {
        let f = TestFunction::power(p)?;
        for k in 1..=d {
            let norm = NormSpec::KyFan(k);
            let lhs = f.gauge_of(&norm, a.eigenvalues())?.ln();
            let rhs = f.gauge_of(&norm, b.eigenvalues())?.ln();
            grid.push(GridMargin {
                p,
                k,
                margin: signed_margin(lhs, rhs),
            });
        }
    }
    let witness = grid
        .iter()
        .filter(|g| !(g.margin >= -GRID_TOL))
        .min_by(|x, y| x.margin.total_cmp(&y.margin))
        .copied();
    let grid_holds = witness.is_none();
    Ok(CharacterizationReport {
        mode,
        agreement: grid_holds == predicate.holds(),
        predicate,
        grid,
        grid_tol: GRID_TOL,
        grid_holds,
        witness,
    })
}

/// `(1/p) log((1/d) ‖B^{-p}‖_1)`.
pub fn p_limit_value(b: &PsdMatrix, p: f64) -> Result<f64> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::BadSpec(format!("p-limit exponent {p}")));
    }
    if !b.is_definite() {
        return Err(Error::SingularNegativePower);
    }
    let values = b.eigenvalues().values();
    // mean of expm1 keeps the small-p regime free of cancellation
    let mean = values.iter().map(|&x| (-p * x.ln()).exp_m1()).sum::<f64>() / values.len() as f64;
    Ok(mean.ln_1p() / p)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PLimitReport {
    pub p_values: Vec<f64>,
    pub values: Vec<f64>,
    /// `-(1/d) log det B`.
    pub limit: f64,
    /// Values are non-increasing as `p` decreases.
    pub monotone: bool,
    /// Distance to the limit at the smallest `p`.
    pub gap: f64,
    pub tol: f64,
    pub within_tol: bool,
}

impl PLimitReport {
    pub fn holds(&self) -> bool {
        self.monotone && self.within_tol
    }
}

pub fn p_limit_check(b: &PsdMatrix, p_seq: &[f64], tol: f64) -> Result<PLimitReport> {
    if p_seq.is_empty() || p_seq.iter().any(|&p| !(p > 0.0)) || p_seq.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::PrerequisiteViolated("p sequence must be positive and strictly decreasing".into()));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::BadTol(tol));
    }
    let values = p_seq.iter().map(|&p| p_limit_value(b, p)).collect::<Result<Vec<_>>>()?;
    let limit = -b.log_det() / b.dim() as f64;
    let monotone = values
        .windows(2)
        .all(|w| w[1] <= w[0] + 1e-12 * w[0].abs().max(1.0));
    let gap = (values[values.len() - 1] - limit).abs();
    Ok(PLimitReport {
        p_values: p_seq.to_vec(),
        values,
        limit,
        monotone,
        gap,
        tol,
        within_tol: gap <= tol,
    })
}

//! Dense complex spectral kernel.
//!
//! Hermitian eigendecompositions and singular value decompositions are
//! delegated to `nalgebra`; everything built on top of them (certification,
//! the `0^z = 0` functional calculus, absolute values, logarithms and
//! exponentials) lives here.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::major::SpectrumVector;

/// Relative Hermiticity tolerance used by [`PsdMatrix::certify`].
pub const DEFAULT_HERM_TOL: f64 = 1e-10;
/// Relative eigenvalue-negativity tolerance used by [`PsdMatrix::certify`].
pub const DEFAULT_PSD_TOL: f64 = 1e-10;

const MAX_SOLVER_ITERATIONS: usize = 10_000;

/// Rank tolerance `d * eps * lambda_max`: eigenvalues at or below it count as zero.
pub fn zero_tol(dim: usize, lambda_max: f64) -> f64 {
    dim as f64 * f64::EPSILON * lambda_max.abs()
}

/// A dense square complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn new(inner: DMatrix<Complex64>) -> Result<Self> {
        if inner.nrows() == 0 || inner.nrows() != inner.ncols() {
            return Err(Error::BadShape {
                expected: inner.nrows() * inner.nrows(),
                got: inner.len(),
            });
        }
        if inner.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(inner))
    }

    /// Builds a `dim x dim` matrix from row-major entries.
    pub fn from_row_slice(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::BadShape {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::BadShape {
                    expected: dim,
                    got: row.len(),
                });
            }
            entries.extend(row.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::from_row_slice(dim, &entries)
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let entries: Vec<Complex64> = diag.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_complex_diagonal(&entries)
    }

    pub fn from_complex_diagonal(diag: &[Complex64]) -> Result<Self> {
        let n = diag.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, &z) in diag.iter().enumerate() {
            m[(i, i)] = z;
        }
        Self::new(m)
    }

    pub(crate) fn from_inner_unchecked(inner: DMatrix<Complex64>) -> Self {
        Self(inner)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, c: f64) -> Self {
        Self(&self.0 * Complex64::new(c, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn determinant(&self) -> Complex64 {
        self.0.clone().determinant()
    }

    /// `||M - M^H||_F`.
    pub fn hermiticity_residual(&self) -> f64 {
        (&self.0 - self.0.adjoint())
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `(M + M^H) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0))
    }

    /// Conjugation `U M U^H`.
    pub fn conjugate_by(&self, unitary: &ComplexMatrix) -> Self {
        Self(&unitary.0 * &self.0 * unitary.0.adjoint())
    }

    /// Product of an ordered list of matrices, left to right.
    pub fn product<'a, I>(factors: I) -> Option<Self>
    where
        I: IntoIterator<Item = &'a ComplexMatrix>,
    {
        let mut iter = factors.into_iter();
        let first = iter.next()?.clone();
        Some(iter.fold(first, |acc, m| &acc * m))
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

/// Eigenvalues in descending order together with the matching orthonormal
/// eigenvectors (as columns of `unitary`).
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: SpectrumVector,
    pub unitary: ComplexMatrix,
}

impl SpectralDecomposition {
    /// `U diag(f(lambda_i)) U^H`.
    pub fn apply<F>(&self, f: F) -> ComplexMatrix
    where
        F: Fn(f64) -> Complex64,
    {
        let u = self.unitary.as_matrix();
        let mut scaled = u.clone();
        for (j, &lambda) in self.eigenvalues.values().iter().enumerate() {
            let fj = f(lambda);
            for i in 0..scaled.nrows() {
                scaled[(i, j)] *= fj;
            }
        }
        ComplexMatrix::from_inner_unchecked(scaled * u.adjoint())
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(|x| Complex64::new(x, 0.0))
    }

    /// Reorders `values` (paired with the columns of `unitary`) descending.
    fn sorted(values: Vec<f64>, unitary: DMatrix<Complex64>) -> Result<Self> {
        let order = descending_order(&values);
        let n = unitary.nrows();
        let mut u = DMatrix::zeros(n, order.len());
        let mut sorted = Vec::with_capacity(order.len());
        for (dst, &src) in order.iter().enumerate() {
            u.set_column(dst, &unitary.column(src));
            sorted.push(values[src]);
        }
        Ok(Self {
            eigenvalues: SpectrumVector::from_descending(sorted)?,
            unitary: ComplexMatrix::from_inner_unchecked(u),
        })
    }
}

/// Stable descending order; ties keep their input order.
pub(crate) fn descending_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    order
}

fn check_hermitian(h: &ComplexMatrix, herm_tol: f64) -> Result<()> {
    check_hermitian_at_scale(h, herm_tol, 0.0)
}

/// Residual bound relative to `max(‖h‖, scale)`, for matrices whose rounding
/// error lives at a scale larger than their own norm.
fn check_hermitian_at_scale(h: &ComplexMatrix, herm_tol: f64, scale: f64) -> Result<()> {
    let residual = h.hermiticity_residual();
    let bound = herm_tol * h.frobenius_norm().max(scale);
    if residual > bound {
        return Err(Error::NonHermitian { residual, bound });
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
pub fn eig_hermitian(h: &ComplexMatrix) -> Result<SpectralDecomposition> {
    check_hermitian(h, DEFAULT_HERM_TOL)?;
    eig_symmetrized(&h.hermitian_part())
}

fn eig_symmetrized(h: &ComplexMatrix) -> Result<SpectralDecomposition> {
    let eig = SymmetricEigen::try_new(h.0.clone(), f64::EPSILON, MAX_SOLVER_ITERATIONS)
        .ok_or(Error::ConvergenceFailure)?;
    if eig.eigenvalues.iter().any(|x| !x.is_finite()) {
        return Err(Error::ConvergenceFailure);
    }
    SpectralDecomposition::sorted(eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// A certified positive semi-definite matrix.
///
/// Certification symmetrizes the entries, and eigenvalues at or below the
/// rank tolerance (including slightly negative ones within `psd_tol`) are
/// clamped to exactly zero. The eigendecomposition is kept alongside.
#[derive(Clone, Debug, PartialEq)]
pub struct PsdMatrix {
    base: ComplexMatrix,
    herm_tol: f64,
    psd_tol: f64,
    decomposition: SpectralDecomposition,
}

impl PsdMatrix {
    pub fn certify(m: ComplexMatrix) -> Result<Self> {
        Self::certify_with(m, DEFAULT_HERM_TOL, DEFAULT_PSD_TOL)
    }

    pub fn certify_with(m: ComplexMatrix, herm_tol: f64, psd_tol: f64) -> Result<Self> {
        Self::certify_at_scale(m, herm_tol, psd_tol, 0.0)
    }

    /// As [`PsdMatrix::certify_with`], with the Hermiticity residual measured
    /// against `max(‖m‖, scale)`.
    pub(crate) fn certify_at_scale(m: ComplexMatrix, herm_tol: f64, psd_tol: f64, scale: f64) -> Result<Self> {
        check_hermitian_at_scale(&m, herm_tol, scale)?;
        let sym = m.hermitian_part();
        let mut decomposition = eig_symmetrized(&sym)?;
        let values = decomposition.eigenvalues.values();
        let lambda_max = values[0];
        let lambda_min = values[values.len() - 1];
        let bound = -psd_tol * lambda_max.max(1.0);
        if lambda_min < bound {
            return Err(Error::NotPsd { lambda_min, bound });
        }
        let tol = zero_tol(sym.dim(), lambda_max);
        let clamped: Vec<f64> = values
            .iter()
            .map(|&x| if x <= tol { 0.0 } else { x })
            .collect();
        let base = if clamped.as_slice() != values {
            decomposition.eigenvalues = SpectrumVector::from_descending(clamped)?;
            decomposition.reconstruct().hermitian_part()
        } else {
            sym
        };
        Ok(Self {
            base,
            herm_tol,
            psd_tol,
            decomposition,
        })
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::certify(ComplexMatrix::from_diagonal(diag)?)
    }

    /// Builds `U diag(lambda) U^H` from a known decomposition; `lambda` must be
    /// non-negative and descending.
    pub(crate) fn from_decomposition(decomposition: SpectralDecomposition) -> Result<Self> {
        let values = decomposition.eigenvalues.values();
        if let Some(i) = values.iter().position(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(Error::NegativeEntry(i));
        }
        let base = decomposition.reconstruct().hermitian_part();
        Ok(Self {
            base,
            herm_tol: DEFAULT_HERM_TOL,
            psd_tol: DEFAULT_PSD_TOL,
            decomposition,
        })
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn as_complex(&self) -> &ComplexMatrix {
        &self.base
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.decomposition
    }

    pub fn eigenvalues(&self) -> &SpectrumVector {
        &self.decomposition.eigenvalues
    }

    pub fn herm_tol(&self) -> f64 {
        self.herm_tol
    }

    pub fn psd_tol(&self) -> f64 {
        self.psd_tol
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues().values()[0]
    }

    pub fn lambda_min(&self) -> f64 {
        *self.eigenvalues().values().last().expect("dim >= 1")
    }

    pub fn zero_tol(&self) -> f64 {
        zero_tol(self.dim(), self.lambda_max())
    }

    /// True when every eigenvalue exceeds the rank tolerance.
    pub fn is_definite(&self) -> bool {
        self.lambda_min() > self.zero_tol()
    }

    /// `log det`, `-inf` for singular matrices.
    pub fn log_det(&self) -> f64 {
        self.eigenvalues().values().iter().map(|x| x.ln()).sum()
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        if !(c >= 0.0) || !c.is_finite() {
            return Err(Error::PrerequisiteViolated(format!(
                "scale factor {c} must be finite and non-negative"
            )));
        }
        let values = self.eigenvalues().values().iter().map(|x| x * c).collect();
        Self::from_decomposition(SpectralDecomposition {
            eigenvalues: SpectrumVector::from_descending(values)?,
            unitary: self.decomposition.unitary.clone(),
        })
    }

    /// `V A V^H` for a unitary `V`.
    pub fn conjugate_by(&self, unitary: &ComplexMatrix) -> Result<Self> {
        Self::from_decomposition(SpectralDecomposition {
            eigenvalues: self.eigenvalues().clone(),
            unitary: unitary * &self.decomposition.unitary,
        })
    }
}

/// Sorted singular value decomposition pieces: `(sigma, V)` with `L = W diag(sigma) V^H`.
fn svd_right(l: &ComplexMatrix) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    let svd = SVD::try_new(l.0.clone(), false, true, f64::EPSILON, MAX_SOLVER_ITERATIONS)
        .ok_or(Error::ConvergenceFailure)?;
    let v_t = svd.v_t.ok_or(Error::ConvergenceFailure)?;
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    if sigma.iter().any(|x| !x.is_finite()) {
        return Err(Error::ConvergenceFailure);
    }
    Ok((sigma, v_t.adjoint()))
}

/// Singular values of `L`, descending.
pub fn singular_values(l: &ComplexMatrix) -> Result<SpectrumVector> {
    let svd = SVD::try_new(l.0.clone(), false, false, f64::EPSILON, MAX_SOLVER_ITERATIONS)
        .ok_or(Error::ConvergenceFailure)?;
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    if sigma.iter().any(|x| !x.is_finite()) {
        return Err(Error::ConvergenceFailure);
    }
    SpectrumVector::from_unsorted(sigma)
}

/// Largest singular value.
pub fn operator_norm(l: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(l)?.values()[0])
}

/// `|L| = (L^H L)^{1/2}`, assembled as `V diag(sigma) V^H` from the SVD of `L`.
pub fn matrix_abs(l: &ComplexMatrix) -> Result<PsdMatrix> {
    let (sigma, v) = svd_right(l)?;
    let mut decomposition = SpectralDecomposition::sorted(sigma, v)?;
    let values = decomposition.eigenvalues.values();
    let tol = zero_tol(l.dim(), values[0]);
    let clamped = values
        .iter()
        .map(|&x| if x <= tol { 0.0 } else { x })
        .collect();
    decomposition.eigenvalues = SpectrumVector::from_descending(clamped)?;
    PsdMatrix::from_decomposition(decomposition)
}

/// `lambda^z := exp(z log lambda)` for `lambda > 0`, and `0^z := 0`.
fn scalar_power(lambda: f64, z: Complex64) -> Complex64 {
    if lambda > 0.0 {
        (z * lambda.ln()).exp()
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// Complex power `A^z` through the functional calculus with `0^z = 0`.
pub fn psd_power(a: &PsdMatrix, z: Complex64) -> Result<ComplexMatrix> {
    if z == Complex64::new(1.0, 0.0) {
        return Ok(a.base.clone());
    }
    if z.re < 0.0 && !a.is_definite() {
        return Err(Error::SingularNegativePower);
    }
    let tol = a.zero_tol();
    Ok(a
        .decomposition
        .apply(|x| if x > tol { scalar_power(x, z) } else { Complex64::new(0.0, 0.0) }))
}

/// Real power `A^p` as a certified PSD matrix (same zero convention as [`psd_power`]).
pub fn psd_power_real(a: &PsdMatrix, p: f64) -> Result<PsdMatrix> {
    if p == 1.0 {
        return Ok(a.clone());
    }
    if p < 0.0 && !a.is_definite() {
        return Err(Error::SingularNegativePower);
    }
    let tol = a.zero_tol();
    map_spectrum(a, |x| if x > tol { x.powf(p) } else { 0.0 })
}

/// Hermitian logarithm of a positive definite matrix.
pub fn matrix_log(a: &PsdMatrix) -> Result<ComplexMatrix> {
    if !a.is_definite() {
        return Err(Error::SingularLog);
    }
    Ok(a.decomposition.apply(|x| Complex64::new(x.ln(), 0.0)))
}

/// Exponential of a Hermitian matrix; always positive definite.
pub fn matrix_exp(h: &ComplexMatrix) -> Result<PsdMatrix> {
    let eig = eig_hermitian(h)?;
    let values = eig.eigenvalues.values().iter().map(|x| x.exp()).collect();
    PsdMatrix::from_decomposition(SpectralDecomposition {
        eigenvalues: SpectrumVector::from_descending(values)?,
        unitary: eig.unitary,
    })
}

/// Applies a scalar function through the eigendecomposition.
///
/// Zero eigenvalues are mapped through `f(0.0)`, so `f` must carry its
/// continuous extension `f(0) := f(0+)`. An infinite value there signals a
/// function singular at zero.
pub fn herm_fun<F>(a: &PsdMatrix, f: F) -> Result<PsdMatrix>
where
    F: Fn(f64) -> f64,
{
    let values: Vec<f64> = a.eigenvalues().values().iter().map(|&x| f(x)).collect();
    if values.iter().any(|x| x.is_infinite()) {
        return Err(Error::FunctionSingularAtZero);
    }
    if let Some(i) = values.iter().position(|x| !(*x >= 0.0)) {
        return Err(Error::NegativeEntry(i));
    }
    map_values(a, values)
}

fn map_spectrum<F>(a: &PsdMatrix, f: F) -> Result<PsdMatrix>
where
    F: Fn(f64) -> f64,
{
    let values = a.eigenvalues().values().iter().map(|&x| f(x)).collect();
    map_values(a, values)
}

fn map_values(a: &PsdMatrix, values: Vec<f64>) -> Result<PsdMatrix> {
    let decomposition =
        SpectralDecomposition::sorted(values, a.decomposition.unitary.as_matrix().clone())?;
    PsdMatrix::from_decomposition(decomposition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{ginibre, haar_unitary, seeded_rng, wishart};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        (a - b).frobenius_norm() / b.frobenius_norm().max(1e-300)
    }

    fn random_hermitian(seed: u64, d: usize) -> ComplexMatrix {
        let g = ginibre(&mut seeded_rng(seed, 0), d);
        g.hermitian_part()
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let eig = eig_hermitian(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(eig.eigenvalues.values(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_is_reordered_descending() {
        let eig = eig_hermitian(&ComplexMatrix::from_diagonal(&[1.0, 3.0, 2.0]).unwrap()).unwrap();
        assert_eq!(eig.eigenvalues.values(), &[3.0, 2.0, 1.0]);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let h = random_hermitian(11, 5);
        let eig = eig_hermitian(&h).unwrap();
        assert!(rel_diff(&eig.reconstruct(), &h) < 1e-10);
        let u = eig.unitary.as_matrix();
        let gram = u.adjoint() * u - DMatrix::identity(5, 5);
        assert!(gram.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-10 * 5.0);
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let m = ComplexMatrix::from_row_slice(2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])
            .unwrap();
        assert!(matches!(eig_hermitian(&m), Err(Error::NonHermitian { .. })));
        assert!(matches!(PsdMatrix::certify(m), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn indefinite_is_rejected() {
        let m = ComplexMatrix::from_diagonal(&[1.0, -0.5]).unwrap();
        assert!(matches!(PsdMatrix::certify(m), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn tiny_eigenvalues_clamp_to_zero() {
        let a = PsdMatrix::certify(ComplexMatrix::from_diagonal(&[1.0, 1e-17]).unwrap()).unwrap();
        assert_eq!(a.eigenvalues().values(), &[1.0, 0.0]);
        assert!(!a.is_definite());
        let b = PsdMatrix::certify(ComplexMatrix::from_diagonal(&[1.0, -1e-14]).unwrap()).unwrap();
        assert_eq!(b.eigenvalues().values(), &[1.0, 0.0]);
        assert_eq!(b.as_complex().get(1, 1), c(0.0, 0.0));
    }

    #[test]
    fn non_finite_entries_are_rejected() {
        assert_eq!(
            ComplexMatrix::from_diagonal(&[1.0, f64::NAN]).unwrap_err(),
            Error::NonFinite
        );
    }

    #[test]
    fn abs_of_minus_identity_and_unitaries() {
        let abs = matrix_abs(&ComplexMatrix::identity(3).scale(-1.0)).unwrap();
        assert!(rel_diff(abs.as_complex(), &ComplexMatrix::identity(3)) < 1e-14);
        let u = haar_unitary(&mut seeded_rng(5, 0), 4);
        let abs = matrix_abs(&u).unwrap();
        assert!(rel_diff(abs.as_complex(), &ComplexMatrix::identity(4)) < 1e-12);
    }

    #[test]
    fn abs_of_normal_diagonal_is_entrywise_modulus() {
        let l = ComplexMatrix::from_complex_diagonal(&[c(-2.0, 0.0), c(0.0, 3.0)]).unwrap();
        let abs = matrix_abs(&l).unwrap();
        let expected = ComplexMatrix::from_diagonal(&[2.0, 3.0]).unwrap();
        assert!(rel_diff(abs.as_complex(), &expected) < 1e-14);
    }

    #[test]
    fn singular_values_basic_cases() {
        assert_eq!(
            singular_values(&ComplexMatrix::zeros(3)).unwrap().values(),
            &[0.0, 0.0, 0.0]
        );
        let s = singular_values(&ComplexMatrix::from_diagonal(&[1.0, -4.0]).unwrap()).unwrap();
        assert!((s.values()[0] - 4.0).abs() < 1e-14 && (s.values()[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn singular_values_match_eigenvalues_of_abs() {
        for seed in 0..10 {
            let l = ginibre(&mut seeded_rng(seed, 1), 5);
            let s = singular_values(&l).unwrap();
            let abs = matrix_abs(&l).unwrap();
            let e = eig_hermitian(abs.as_complex()).unwrap();
            for (x, y) in s.values().iter().zip(e.eigenvalues.values()) {
                assert!((x - y).abs() <= 1e-10 * s.values()[0], "{x} vs {y}");
            }
        }
    }

    #[test]
    fn abs_squared_is_gram_matrix() {
        let l = ginibre(&mut seeded_rng(3, 0), 4);
        let abs = matrix_abs(&l).unwrap();
        let sq = abs.as_complex() * abs.as_complex();
        assert!(rel_diff(&sq, &(&l.adjoint() * &l)) < 1e-10);
    }

    #[test]
    fn power_uses_zero_convention() {
        let a = PsdMatrix::from_diagonal(&[4.0, 0.0]).unwrap();
        let half = psd_power(&a, c(0.5, 0.0)).unwrap();
        assert!(rel_diff(&half, &ComplexMatrix::from_diagonal(&[2.0, 0.0]).unwrap()) < 1e-15);
        assert_eq!(psd_power(&a, c(-1.0, 0.0)), Err(Error::SingularNegativePower));
        // purely imaginary exponents are allowed on singular matrices
        assert!(psd_power(&a, c(0.0, 1.0)).is_ok());
    }

    #[test]
    fn power_minus_one_inverts() {
        let a = PsdMatrix::from_diagonal(&[2.0]).unwrap();
        let inv = psd_power(&a, c(-1.0, 0.0)).unwrap();
        assert!((inv.get(0, 0) - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn power_one_returns_input() {
        let a = wishart(&mut seeded_rng(8, 0), 4);
        assert_eq!(&psd_power(&a, c(1.0, 0.0)).unwrap(), a.as_complex());
    }

    #[test]
    fn complex_power_keeps_moduli() {
        let a = PsdMatrix::from_diagonal(&[4.0, 9.0]).unwrap();
        for t in [-3.0, -0.5, 0.0, 0.7, 2.0, 10.0] {
            let s = singular_values(&psd_power(&a, c(1.0, t)).unwrap()).unwrap();
            assert!((s.values()[0] - 9.0).abs() < 1e-12 && (s.values()[1] - 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn powers_add_exponents() {
        let a = wishart(&mut seeded_rng(21, 0), 4);
        let zs = [c(0.5, 0.0), c(1.0, 1.0), c(-1.0, 0.3), c(2.0, -0.5)];
        for &z1 in &zs {
            for &z2 in &zs {
                let lhs = &psd_power(&a, z1).unwrap() * &psd_power(&a, z2).unwrap();
                let rhs = psd_power(&a, z1 + z2).unwrap();
                assert!(rel_diff(&lhs, &rhs) < 1e-10, "{z1} {z2}");
            }
        }
    }

    #[test]
    fn log_and_exp_of_identity_and_zero() {
        let log = matrix_log(&PsdMatrix::certify(ComplexMatrix::identity(3)).unwrap()).unwrap();
        assert!(log.frobenius_norm() < 1e-15);
        let exp = matrix_exp(&ComplexMatrix::zeros(3)).unwrap();
        assert!(rel_diff(exp.as_complex(), &ComplexMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn log_exp_round_trip() {
        for seed in 0..5 {
            let a = wishart(&mut seeded_rng(seed, 7), 4);
            let back = matrix_exp(&matrix_log(&a).unwrap()).unwrap();
            assert!(rel_diff(back.as_complex(), a.as_complex()) < 1e-10);
            assert!(back.is_definite());
        }
    }

    #[test]
    fn log_of_singular_fails() {
        let a = PsdMatrix::from_diagonal(&[1.0, 0.0]).unwrap();
        assert_eq!(matrix_log(&a), Err(Error::SingularLog));
    }

    #[test]
    fn herm_fun_cases() {
        let a = PsdMatrix::from_diagonal(&[1.0, 2.0]).unwrap();
        let id = herm_fun(&a, |x| x).unwrap();
        assert!(rel_diff(id.as_complex(), a.as_complex()) < 1e-15);
        let hinge = herm_fun(&a, |x| (x + 1.0).max(0.0)).unwrap();
        assert!(rel_diff(hinge.as_complex(), &ComplexMatrix::from_diagonal(&[2.0, 3.0]).unwrap()) < 1e-15);
        let singular = PsdMatrix::from_diagonal(&[1.0, 0.0]).unwrap();
        assert_eq!(herm_fun(&singular, |x| 1.0 / x), Err(Error::FunctionSingularAtZero));
    }

    #[test]
    fn monotone_functions_preserve_order() {
        let a = wishart(&mut seeded_rng(4, 4), 5);
        let f = |x: f64| (x + 0.3).powf(1.7);
        let fa = herm_fun(&a, f).unwrap();
        let expected: Vec<f64> = a.eigenvalues().values().iter().map(|&x| f(x)).collect();
        assert_eq!(fa.eigenvalues().values(), expected.as_slice());
    }

    #[test]
    fn unitary_invariance_of_singular_values() {
        let mut rng = seeded_rng(99, 0);
        let l = ginibre(&mut rng, 4);
        let u = haar_unitary(&mut rng, 4);
        let v = haar_unitary(&mut rng, 4);
        let s0 = singular_values(&l).unwrap();
        let s1 = singular_values(&(&(&u * &l) * &v)).unwrap();
        for (x, y) in s0.values().iter().zip(s1.values()) {
            assert!((x - y).abs() < 1e-10 * s0.values()[0]);
        }
    }
}

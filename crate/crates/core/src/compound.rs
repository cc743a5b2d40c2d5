//! Antisymmetric tensor powers as compound matrices of `k x k` minors.

use itertools::Itertools;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{ComplexMatrix, PsdMatrix};

/// All `k`-subsets of `{0, .., d-1}` in lexicographic order; row and column
/// labels of `∧^k L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompoundIndex {
    d: usize,
    k: usize,
    subsets: Vec<Vec<usize>>,
}

impl CompoundIndex {
    pub fn new(d: usize, k: usize) -> Result<Self> {
        if k == 0 || k > d {
            return Err(Error::BadPower { k, d });
        }
        let subsets = (0..d).combinations(k).collect();
        Ok(Self { d, k, subsets })
    }

    pub fn ambient_dim(&self) -> usize {
        self.d
    }

    pub fn power(&self) -> usize {
        self.k
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    /// `C(d, k)`.
    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }
}

/// Determinant by Gaussian elimination with partial pivoting. Consumes `m`.
fn det_in_place(mut m: Vec<Complex64>, n: usize) -> Complex64 {
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i * n + col].norm().total_cmp(&m[j * n + col].norm()))
            .expect("non-empty range");
        let p = m[pivot * n + col];
        if p == Complex64::new(0.0, 0.0) {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            for c in 0..n {
                m.swap(pivot * n + c, col * n + c);
            }
            det = -det;
        }
        det *= p;
        for r in col + 1..n {
            let factor = m[r * n + col] / p;
            if factor != Complex64::new(0.0, 0.0) {
                for c in col..n {
                    let v = m[col * n + c];
                    m[r * n + c] -= factor * v;
                }
            }
        }
    }
    det
}

fn minor(l: &DMatrix<Complex64>, rows: &[usize], cols: &[usize]) -> Complex64 {
    let k = rows.len();
    let mut block = Vec::with_capacity(k * k);
    for &r in rows {
        for &c in cols {
            block.push(l[(r, c)]);
        }
    }
    det_in_place(block, k)
}

/// `∧^k L`, entry `(S, T)` being `det L[S, T]`, subsets in lexicographic order.
pub fn antisym_power(l: &ComplexMatrix, k: usize) -> Result<ComplexMatrix> {
    let index = CompoundIndex::new(l.dim(), k)?;
    let inner = l.as_matrix();
    let n = index.len();
    let subsets = index.subsets();
    let out = DMatrix::from_fn(n, n, |i, j| minor(inner, &subsets[i], &subsets[j]));
    Ok(ComplexMatrix::from_inner_unchecked(out))
}

/// `∧^k A` for PSD `A`, certified PSD with the tolerances of `A`.
///
/// Minors carry rounding at the scale `λ_max(A)^k`, which can exceed the norm
/// of the compound itself when `A` is singular.
pub fn antisym_power_psd(a: &PsdMatrix, k: usize) -> Result<PsdMatrix> {
    let c = antisym_power(a.as_complex(), k)?;
    let scale = a.lambda_max().powi(k as i32) * c.dim() as f64;
    PsdMatrix::certify_at_scale(c, a.herm_tol(), a.psd_tol(), scale)
}

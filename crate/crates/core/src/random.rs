//! Seeded random matrix ensembles.
//!
//! Every stream is derived from a 64-bit seed plus a per-sample offset, so a
//! single sample of a scan can be replayed in isolation.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::major::SpectrumVector;
use crate::spectral::{ComplexMatrix, PsdMatrix, SpectralDecomposition};

/// Independent ChaCha stream for `(seed, offset)`.
pub fn seeded_rng(seed: u64, offset: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(offset);
    rng
}

/// Standard complex Gaussian entry with `E|z|^2 = 1`.
fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Ginibre matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let m = DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    ComplexMatrix::from_inner_unchecked(m)
}

/// Wishart matrix `G G^H / d`.
pub fn wishart<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> PsdMatrix {
    let g = ginibre(rng, dim);
    let w = (&g * &g.adjoint()).scale(1.0 / dim as f64);
    PsdMatrix::certify(w).expect("Wishart samples are Hermitian PSD")
}

pub fn wishart_family<R: Rng + ?Sized>(rng: &mut R, count: usize, dim: usize) -> Vec<PsdMatrix> {
    (0..count).map(|_| wishart(rng, dim)).collect()
}

/// Haar-distributed unitary from the phase-corrected QR factorization of a Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let qr = ginibre(rng, dim).into_inner().qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    ComplexMatrix::from_inner_unchecked(q)
}

/// PSD matrix `U diag(values) U^H` with a Haar eigenbasis. `values` must be
/// non-negative; they are sorted descending. Zeros stay exact zeros.
pub fn psd_with_spectrum<R: Rng + ?Sized>(rng: &mut R, values: &[f64]) -> Result<PsdMatrix> {
    let unitary = haar_unitary(rng, values.len());
    psd_from_eigenbasis(unitary, values)
}

/// PSD matrix with the given eigenbasis (columns of `unitary`) and eigenvalues.
pub fn psd_from_eigenbasis(unitary: ComplexMatrix, values: &[f64]) -> Result<PsdMatrix> {
    let order = crate::spectral::descending_order(values);
    let u = unitary.as_matrix();
    let mut sorted_u = DMatrix::zeros(u.nrows(), u.ncols());
    let mut sorted = Vec::with_capacity(values.len());
    for (dst, &src) in order.iter().enumerate() {
        sorted_u.set_column(dst, &u.column(src));
        sorted.push(values[src]);
    }
    PsdMatrix::from_decomposition(SpectralDecomposition {
        eigenvalues: SpectrumVector::from_descending(sorted)?,
        unitary: ComplexMatrix::from_inner_unchecked(sorted_u),
    })
}

/// Wishart matrix with the eigenvalue at position `zero_index` (descending
/// order) replaced by an exact zero.
pub fn singular_wishart<R: Rng + ?Sized>(rng: &mut R, dim: usize, zero_index: usize) -> Result<PsdMatrix> {
    let w = wishart(rng, dim);
    let mut values = w.eigenvalues().values().to_vec();
    values[zero_index.min(dim - 1)] = 0.0;
    psd_from_eigenbasis(w.decomposition().unitary.clone(), &values)
}

/// Uniform draw from the open probability simplex (normalized exponentials).
pub fn simplex_weights<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..count)
        .map(|_| -(1.0 - rng.random::<f64>()).ln() + 1e-3)
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

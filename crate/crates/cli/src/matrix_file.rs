//! Matrix input documents: `{"d": 2, "matrices": [[[[re, im], ...], ...], ...], "labels": [...]}`.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use logmaj::ineq::MatrixFamily;
use logmaj::spectral::{ComplexMatrix, PsdMatrix};

use crate::document::{to_json, Real};
use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFileDocument {
    pub d: usize,
    pub matrices: Vec<Vec<Vec<[Real; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    /// Probability weights of the atoms after the first matrix (equivalence checks).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Real>>,
}

impl MatrixFileDocument {
    pub fn from_matrices(matrices: &[PsdMatrix]) -> Self {
        let d = matrices.first().map_or(0, PsdMatrix::dim);
        let rows = matrices
            .iter()
            .map(|m| {
                (0..d)
                    .map(|i| {
                        (0..d)
                            .map(|j| {
                                let z = m.as_complex().get(i, j);
                                [Real(z.re), Real(z.im)]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self {
            d,
            matrices: rows,
            labels: None,
            weights: None,
        }
    }

    /// SHA-256 of the canonical serialization.
    pub fn digest(&self) -> String {
        digest_text(&to_json(self))
    }

    fn complex_matrices(&self) -> Result<Vec<ComplexMatrix>, String> {
        if self.d == 0 {
            return Err("d must be at least 1".into());
        }
        if self.matrices.is_empty() {
            return Err("no matrices".into());
        }
        if let Some(labels) = &self.labels {
            if labels.len() != self.matrices.len() {
                return Err(format!("{} labels for {} matrices", labels.len(), self.matrices.len()));
            }
        }
        self.matrices
            .iter()
            .enumerate()
            .map(|(index, rows)| {
                if rows.len() != self.d {
                    return Err(format!("matrix {index} has {} rows, expected {}", rows.len(), self.d));
                }
                let mut entries = Vec::with_capacity(self.d * self.d);
                for (r, row) in rows.iter().enumerate() {
                    if row.len() != self.d {
                        return Err(format!("matrix {index} row {r} has {} entries, expected {}", row.len(), self.d));
                    }
                    for [re, im] in row {
                        if !re.0.is_finite() || !im.0.is_finite() {
                            return Err(format!("matrix {index} row {r} has a non-finite entry"));
                        }
                        entries.push(Complex64::new(re.0, im.0));
                    }
                }
                ComplexMatrix::from_row_slice(self.d, &entries).map_err(|e| e.to_string())
            })
            .collect()
    }
}

pub fn digest_text(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Clone, Debug)]
pub struct LoadedMatrices {
    pub matrices: Vec<PsdMatrix>,
    pub labels: Option<Vec<String>>,
    pub weights: Option<Vec<f64>>,
    pub digest: String,
}

impl LoadedMatrices {
    pub fn family(&self) -> CliResult<MatrixFamily> {
        Ok(MatrixFamily::new(self.matrices.clone())?)
    }
}

pub fn parse_matrices(text: &str, path: &Path) -> CliResult<LoadedMatrices> {
    let parse_error = |message: String| CliError::Parse {
        path: path.to_path_buf(),
        message,
    };
    let doc: MatrixFileDocument = serde_json::from_str(text).map_err(|e| parse_error(e.to_string()))?;
    let raw = doc.complex_matrices().map_err(parse_error)?;
    let matrices = raw
        .into_iter()
        .enumerate()
        .map(|(index, m)| {
            PsdMatrix::certify(m).map_err(|source| CliError::Certification {
                path: path.to_path_buf(),
                index,
                source,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(LoadedMatrices {
        digest: doc.digest(),
        labels: doc.labels.clone(),
        weights: doc.weights.as_ref().map(|w| w.iter().map(|r| r.0).collect()),
        matrices,
    })
}

/// Reads and certifies every matrix; a failure names the offending index.
pub fn load_matrices(path: &Path) -> CliResult<LoadedMatrices> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_matrices(&text, path)
}

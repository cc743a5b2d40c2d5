use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is empty or has non-finite entries")]
    NonFinite,
    #[error("matrix data is not square: expected {expected} entries, got {got}")]
    BadShape { expected: usize, got: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is not Hermitian: ||M - M^H|| = {residual:e} exceeds {bound:e}")]
    NonHermitian { residual: f64, bound: f64 },
    #[error("matrix is not positive semi-definite: lambda_min = {lambda_min:e} below {bound:e}")]
    NotPsd { lambda_min: f64, bound: f64 },
    #[error("iterative eigen/singular value solver did not converge")]
    ConvergenceFailure,
    #[error("negative real power of a numerically singular matrix")]
    SingularNegativePower,
    #[error("logarithm of a numerically singular matrix")]
    SingularLog,
    #[error("function is singular at zero and the matrix is not invertible")]
    FunctionSingularAtZero,
    #[error("antisymmetric power k = {k} out of range for dimension {d}")]
    BadPower { k: usize, d: usize },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("vector has a negative entry at index {0}")]
    NegativeEntry(usize),
    #[error("vector is not sorted in descending order")]
    NotDescending,
    #[error("invalid norm specification: {0}")]
    BadSpec(String),
    #[error("invalid Hölder exponents: {0}")]
    BadExponents(String),
    #[error("vector is not weakly majorized (prefix {0} fails)")]
    NotWeaklyMajorized(usize),
    #[error("vector is not log-majorized")]
    NotLogMajorized,
    #[error("prerequisite violated: {0}")]
    PrerequisiteViolated(String),
    #[error("theta = {0} outside the admissible range")]
    BadTheta(f64),
    #[error("tolerance must be positive and finite, got {0}")]
    BadTol(f64),
    #[error("invalid measure: {0}")]
    MeasureInvalid(String),
    #[error("invalid test function: {0}")]
    BadFunction(String),
    #[error("empty matrix family")]
    EmptyFamily,
}

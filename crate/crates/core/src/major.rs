//! Spectrum vectors, (log-)majorization predicates, symmetric gauge
//! functions and the constructive completions used to perturb
//! log-majorization relations.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::measure::{integral_log_spectra, integral_spectra};
use crate::spectral::{singular_values, ComplexMatrix};

/// A descending real vector. Entries may be `-inf` (log-domain vectors,
/// `log 0 := -inf`) but never NaN.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumVector {
    values: Vec<f64>,
}

impl SpectrumVector {
    pub fn from_descending(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|x| x.is_nan()) {
            return Err(Error::NonFinite);
        }
        if values.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotDescending);
        }
        Ok(Self { values })
    }

    /// Stable descending sort of arbitrary entries.
    pub fn from_unsorted(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|x| x.is_nan()) {
            return Err(Error::NonFinite);
        }
        let order = crate::spectral::descending_order(&values);
        Ok(Self {
            values: order.into_iter().map(|i| values[i]).collect(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&x| x >= 0.0)
    }

    /// Companion log vector with `log 0 := -inf`.
    pub fn log_values(&self) -> Result<Vec<f64>> {
        if let Some(i) = self.values.iter().position(|&x| x < 0.0) {
            return Err(Error::NegativeEntry(i));
        }
        Ok(self.values.iter().map(|&x| x.ln()).collect())
    }

    pub fn log(&self) -> Result<SpectrumVector> {
        Ok(Self {
            values: self.log_values()?,
        })
    }

    /// Entrywise `exp`, with `exp(-inf) := 0`.
    pub fn exp(&self) -> SpectrumVector {
        Self {
            values: self.values.iter().map(|&x| x.exp()).collect(),
        }
    }

    /// `f` applied entrywise, re-sorted descending.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Result<SpectrumVector> {
        Self::from_unsorted(self.values.iter().map(|&x| f(x)).collect())
    }
}

/// Absolute comparison tolerance in the domain of the predicate (sums or log-sums).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Tolerance {
    /// `1e-9 * max(1, largest finite prefix magnitude)`.
    Auto,
    Absolute(f64),
}

impl Tolerance {
    fn resolve(self, lhs: &[f64], rhs: &[f64]) -> f64 {
        match self {
            Tolerance::Absolute(t) => t,
            Tolerance::Auto => {
                let scale = lhs
                    .iter()
                    .chain(rhs.iter())
                    .filter(|x| x.is_finite())
                    .fold(0.0_f64, |m, x| m.max(x.abs()));
                1e-9 * scale.max(1.0)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MajorizationMode {
    Weak,
    Strong,
    WeakLog,
    Log,
}

impl MajorizationMode {
    fn requires_equality(self) -> bool {
        matches!(self, MajorizationMode::Strong | MajorizationMode::Log)
    }
}

impl fmt::Display for MajorizationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MajorizationMode::Weak => "weak",
            MajorizationMode::Strong => "strong",
            MajorizationMode::WeakLog => "weaklog",
            MajorizationMode::Log => "log",
        })
    }
}

impl FromStr for MajorizationMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weak" => Ok(MajorizationMode::Weak),
            "strong" => Ok(MajorizationMode::Strong),
            "weaklog" => Ok(MajorizationMode::WeakLog),
            "log" => Ok(MajorizationMode::Log),
            other => Err(Error::BadSpec(format!("unknown majorization mode `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MajorizationVerdict {
    Holds,
    /// First prefix (1-based) whose margin is below `-tol`.
    FailsAtK(usize),
    EqualityFailsAtD,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MajorizationReport {
    pub mode: MajorizationMode,
    /// `RHS_k - LHS_k` for every prefix, in the sum or log-sum domain.
    pub partial_margins: Vec<f64>,
    pub tol: f64,
    pub verdict: MajorizationVerdict,
}

impl MajorizationReport {
    pub fn holds(&self) -> bool {
        self.verdict == MajorizationVerdict::Holds
    }

    /// Smallest prefix margin, the full-sum margin included.
    pub fn min_margin(&self) -> f64 {
        self.partial_margins.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn full_margin(&self) -> f64 {
        *self.partial_margins.last().expect("non-empty")
    }
}

/// Prefix sums; once `-inf` is reached the sum saturates there.
fn prefix_sums(v: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    v.iter()
        .map(|&x| {
            acc = if acc == f64::NEG_INFINITY { acc } else { acc + x };
            acc
        })
        .collect()
}

/// `rhs - lhs`, with equal infinities counting as equality.
pub(crate) fn signed_margin(lhs: f64, rhs: f64) -> f64 {
    if lhs == rhs {
        0.0
    } else {
        rhs - lhs
    }
}

fn compare(a: &[f64], b: &[f64], mode: MajorizationMode, tol: Tolerance) -> Result<MajorizationReport> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(Error::LengthMismatch(0, 0));
    }
    let lhs = prefix_sums(a);
    let rhs = prefix_sums(b);
    let tol = tol.resolve(&lhs, &rhs);
    let margins: Vec<f64> = lhs.iter().zip(&rhs).map(|(&l, &r)| signed_margin(l, r)).collect();
    let verdict = match margins.iter().position(|&m| m < -tol) {
        Some(k) => MajorizationVerdict::FailsAtK(k + 1),
        None if mode.requires_equality() && !(margins[margins.len() - 1].abs() <= tol) => {
            MajorizationVerdict::EqualityFailsAtD
        }
        None => MajorizationVerdict::Holds,
    };
    Ok(MajorizationReport {
        mode,
        partial_margins: margins,
        tol,
        verdict,
    })
}

/// `a ≺_w b`: every prefix sum of `a` is at most that of `b`.
pub fn weak_majorize(a: &SpectrumVector, b: &SpectrumVector, tol: Tolerance) -> Result<MajorizationReport> {
    compare(a.values(), b.values(), MajorizationMode::Weak, tol)
}

/// `a ≺ b`: weak majorization plus equal total sums.
pub fn majorize(a: &SpectrumVector, b: &SpectrumVector, tol: Tolerance) -> Result<MajorizationReport> {
    compare(a.values(), b.values(), MajorizationMode::Strong, tol)
}

/// `a ≺_{w log} b` on non-negative vectors, evaluated as `log a ≺_w log b`.
pub fn weak_log_majorize(a: &SpectrumVector, b: &SpectrumVector, tol: Tolerance) -> Result<MajorizationReport> {
    compare(&a.log_values()?, &b.log_values()?, MajorizationMode::WeakLog, tol)
}

/// `a ≺_log b`: weak log-majorization plus equal total products.
pub fn log_majorize(a: &SpectrumVector, b: &SpectrumVector, tol: Tolerance) -> Result<MajorizationReport> {
    compare(&a.log_values()?, &b.log_values()?, MajorizationMode::Log, tol)
}

pub fn check_mode(
    a: &SpectrumVector,
    b: &SpectrumVector,
    mode: MajorizationMode,
    tol: Tolerance,
) -> Result<MajorizationReport> {
    match mode {
        MajorizationMode::Weak => weak_majorize(a, b, tol),
        MajorizationMode::Strong => majorize(a, b, tol),
        MajorizationMode::WeakLog => weak_log_majorize(a, b, tol),
        MajorizationMode::Log => log_majorize(a, b, tol),
    }
}

type GaugeFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Caller-supplied symmetric gauge function.
#[derive(Clone)]
pub struct CustomGauge {
    name: String,
    unit: f64,
    eval: GaugeFn,
}

impl CustomGauge {
    /// Registers a gauge after spot-checking permutation invariance,
    /// absolute homogeneity and the declared value `unit = Φ(1, 0, ..., 0)`
    /// on seeded random inputs.
    pub fn register<F>(name: impl Into<String>, unit: f64, eval: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        let gauge = Self {
            name: name.into(),
            unit,
            eval: Arc::new(eval),
        };
        gauge.spot_check()?;
        Ok(gauge)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn unit(&self) -> f64 {
        self.unit
    }

    pub fn evaluate(&self, a: &[f64]) -> f64 {
        (self.eval)(a)
    }

    fn spot_check(&self) -> Result<()> {
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-10 * x.abs().max(y.abs()).max(1.0);
        let mut rng = crate::random::seeded_rng(0x0067_6175_6765, 0);
        for d in 1..=6 {
            let mut e1 = vec![0.0; d];
            e1[0] = 1.0;
            if !close(self.evaluate(&e1), self.unit) {
                return Err(Error::BadSpec(format!(
                    "gauge `{}` is not normalized to {} in dimension {d}",
                    self.name, self.unit
                )));
            }
            for _ in 0..8 {
                let v: Vec<f64> = (0..d).map(|_| rng.random::<f64>() * 4.0).collect();
                let base = self.evaluate(&v);
                if !base.is_finite() || base < 0.0 {
                    return Err(Error::BadSpec(format!("gauge `{}` is not a finite non-negative value", self.name)));
                }
                let mut rev = v.clone();
                rev.reverse();
                let mut rot = v.clone();
                rot.rotate_left(1);
                if !close(self.evaluate(&rev), base) || !close(self.evaluate(&rot), base) {
                    return Err(Error::BadSpec(format!("gauge `{}` is not permutation invariant", self.name)));
                }
                for c in [0.5, 3.0] {
                    let scaled: Vec<f64> = v.iter().map(|x| x * c).collect();
                    if !close(self.evaluate(&scaled), c * base) {
                        return Err(Error::BadSpec(format!("gauge `{}` is not homogeneous", self.name)));
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CustomGauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomGauge")
            .field("name", &self.name)
            .field("unit", &self.unit)
            .finish_non_exhaustive()
    }
}

impl PartialEq for CustomGauge {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.unit == other.unit
    }
}

/// Symmetric gauge function selector.
#[derive(Clone, Debug, PartialEq)]
pub enum NormSpec {
    KyFan(usize),
    /// Schatten `p`-norm, a quasi-norm for `0 < p < 1`.
    Schatten(f64),
    Operator,
    TraceNorm,
    Custom(CustomGauge),
}

impl NormSpec {
    /// Checks the parameters against vector length `dim`.
    pub fn validate(&self, dim: usize) -> Result<()> {
        match self {
            NormSpec::KyFan(k) if *k == 0 || *k > dim => {
                Err(Error::BadSpec(format!("Ky Fan index {k} outside 1..={dim}")))
            }
            NormSpec::Schatten(p) if !(*p > 0.0) || !p.is_finite() => {
                Err(Error::BadSpec(format!("Schatten exponent {p} must be positive and finite")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormSpec::KyFan(k) => write!(f, "kyfan:{k}"),
            NormSpec::Schatten(p) => write!(f, "schatten:{p}"),
            NormSpec::Operator => f.write_str("op"),
            NormSpec::TraceNorm => f.write_str("trace"),
            NormSpec::Custom(g) => write!(f, "custom:{}", g.name()),
        }
    }
}

impl FromStr for NormSpec {
    type Err = Error;

    /// `op`, `trace`, `kyfan:k`, `schatten:p`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadSpec(format!("cannot parse norm spec `{s}`"));
        match s.split_once(':') {
            None => match s {
                "op" | "operator" => Ok(NormSpec::Operator),
                "trace" => Ok(NormSpec::TraceNorm),
                _ => Err(bad()),
            },
            Some(("kyfan", k)) => {
                let k: usize = k.parse().map_err(|_| bad())?;
                if k == 0 {
                    return Err(bad());
                }
                Ok(NormSpec::KyFan(k))
            }
            Some(("schatten", p)) => {
                let p: f64 = p.parse().map_err(|_| bad())?;
                let spec = NormSpec::Schatten(p);
                spec.validate(usize::MAX)?;
                Ok(spec)
            }
            _ => Err(bad()),
        }
    }
}

/// `Φ(a)` for a non-negative vector.
pub fn gauge_eval(spec: &NormSpec, a: &SpectrumVector) -> Result<f64> {
    spec.validate(a.len())?;
    let v = a.values();
    if let Some(i) = v.iter().position(|&x| !(x >= 0.0)) {
        return Err(Error::NegativeEntry(i));
    }
    let value = match spec {
        NormSpec::KyFan(k) => v[..*k].iter().sum(),
        NormSpec::Operator => v[0],
        NormSpec::TraceNorm => v.iter().sum(),
        NormSpec::Schatten(p) => {
            let m = v.iter().copied().fold(0.0_f64, f64::max);
            if m == 0.0 || m.is_infinite() {
                m
            } else {
                m * v.iter().map(|x| (x / m).powf(*p)).sum::<f64>().powf(1.0 / p)
            }
        }
        NormSpec::Custom(g) => {
            if v.iter().any(|x| x.is_infinite()) {
                f64::INFINITY
            } else {
                g.evaluate(v)
            }
        }
    };
    Ok(value)
}

/// Unitarily invariant norm `Φ(σ(L))`.
pub fn norm_eval(spec: &NormSpec, l: &ComplexMatrix) -> Result<f64> {
    gauge_eval(spec, &singular_values(l)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HoelderReport {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

/// Hölder inequality for a gauge: `Φ(∏ a_l^{β_l}) ≤ ∏ Φ(a_l)^{β_l}`.
pub fn hoelder_gauge(spec: &NormSpec, vectors: &[Vec<f64>], exponents: &[f64]) -> Result<HoelderReport> {
    if vectors.is_empty() || vectors.len() != exponents.len() {
        return Err(Error::BadExponents(format!(
            "{} vectors but {} exponents",
            vectors.len(),
            exponents.len()
        )));
    }
    if exponents.iter().any(|&b| !(b > 0.0) || !b.is_finite()) {
        return Err(Error::BadExponents("exponents must be positive".into()));
    }
    let total: f64 = exponents.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::BadExponents(format!("exponents sum to {total}, not 1")));
    }
    let dim = vectors[0].len();
    for v in vectors {
        if v.len() != dim {
            return Err(Error::LengthMismatch(dim, v.len()));
        }
        if let Some(i) = v.iter().position(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(Error::NegativeEntry(i));
        }
    }
    let mean: Vec<f64> = (0..dim)
        .map(|i| {
            if vectors.iter().any(|v| v[i] == 0.0) {
                0.0
            } else {
                vectors
                    .iter()
                    .zip(exponents)
                    .map(|(v, b)| b * v[i].ln())
                    .sum::<f64>()
                    .exp()
            }
        })
        .collect();
    let lhs = gauge_eval(spec, &SpectrumVector::from_unsorted(mean)?)?;
    let mut rhs = 1.0;
    for (v, b) in vectors.iter().zip(exponents) {
        rhs *= gauge_eval(spec, &SpectrumVector::from_unsorted(v.clone())?)?.powf(*b);
    }
    Ok(HoelderReport {
        lhs,
        rhs,
        margin: rhs - lhs,
    })
}

fn require_descending_finite(v: &[f64]) -> Result<()> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    if v.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::NotDescending);
    }
    Ok(())
}

/// Given `a ≺_w b`, returns a descending `c` with `a ≤ c` entrywise and `c ≺ b`.
///
/// Greedy fill: walking left to right, each entry is raised by the smallest
/// remaining slack `Σ_{i≤j} b_i - Σ_{i≤j} c_i` over the prefixes `j` it
/// belongs to. The last entry absorbs whatever slack is left, so the total
/// sums agree. The result is validated with the predicates.
pub fn complete_to_majorization(a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    require_descending_finite(a)?;
    require_descending_finite(b)?;
    let av = SpectrumVector::from_descending(a.to_vec())?;
    let bv = SpectrumVector::from_descending(b.to_vec())?;
    if let MajorizationVerdict::FailsAtK(k) = weak_majorize(&av, &bv, Tolerance::Auto)?.verdict {
        return Err(Error::NotWeaklyMajorized(k));
    }

    let d = a.len();
    let bounds = prefix_sums(b);
    let mut c = a.to_vec();
    let mut sums = prefix_sums(&c);
    #[allow(clippy::needless_range_loop)]
    for i in 0..d {
        let raise = (i..d)
            .map(|j| bounds[j] - sums[j])
            .fold(f64::INFINITY, f64::min)
            .max(0.0);
        if raise > 0.0 {
            c[i] += raise;
            for s in sums.iter_mut().skip(i) {
                *s += raise;
            }
        }
    }
    // rounding can leave ulp-level inversions
    c.sort_by(|x, y| y.total_cmp(x));

    let cv = SpectrumVector::from_descending(c.clone())?;
    let ok = majorize(&cv, &bv, Tolerance::Auto)?.holds()
        && c.iter().zip(a).all(|(ci, ai)| *ci >= ai - 1e-12 * ai.abs().max(1.0));
    if !ok {
        return Err(Error::PrerequisiteViolated(
            "majorization completion failed validation".into(),
        ));
    }
    Ok(c)
}

/// Result of [`perturb_log_majorants`]: `sequence[j]` belongs to `b_seq[m0 + j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbedMajorants {
    pub m0: usize,
    pub sequence: Vec<Vec<f64>>,
}

/// Given `a ≺_log b` and strictly positive descending `b^(m)` decreasing to
/// `b`, builds `a^(m)` with `a ≤ a^(m) ≺_log b^(m)` and `a^(m) → a`.
///
/// When `a_d > 0` each `a^(m)` is `exp` of a majorization completion of
/// `log a` under `log b^(m)`. When `a_d = 0`, with `r` and `s` the numbers of
/// positive entries of `a` and `b`, the trailing block is filled with
/// `α^(m) = (∏_{i≤s+1} b^(m)_i / ∏_{i≤r} a_i)^{1/(s-r+1)}` and `m0` is the
/// first index with `α^(m) ≤ min(a_r, b_s)`.
pub fn perturb_log_majorants(a: &[f64], b: &[f64], b_seq: &[Vec<f64>]) -> Result<PerturbedMajorants> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    require_descending_finite(a)?;
    require_descending_finite(b)?;
    let av = SpectrumVector::from_descending(a.to_vec())?;
    let bv = SpectrumVector::from_descending(b.to_vec())?;
    if !log_majorize(&av, &bv, Tolerance::Auto)?.holds() {
        return Err(Error::NotLogMajorized);
    }
    let d = a.len();
    for (m, bm) in b_seq.iter().enumerate() {
        let bad = |why: &str| Error::PrerequisiteViolated(format!("b_seq[{m}] {why}"));
        if bm.len() != d {
            return Err(Error::LengthMismatch(d, bm.len()));
        }
        if bm.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
            return Err(bad("is not strictly positive"));
        }
        if bm.windows(2).any(|w| w[0] < w[1]) {
            return Err(bad("is not descending"));
        }
        if bm.iter().zip(b).any(|(x, y)| x < y) {
            return Err(bad("is not above b"));
        }
        if m > 0 && bm.iter().zip(&b_seq[m - 1]).any(|(x, y)| x > y) {
            return Err(bad("increases along the sequence"));
        }
    }

    if a[d - 1] > 0.0 {
        let log_a: Vec<f64> = a.iter().map(|x| x.ln()).collect();
        let sequence = b_seq
            .iter()
            .map(|bm| {
                let log_b: Vec<f64> = bm.iter().map(|x| x.ln()).collect();
                let c = complete_to_majorization(&log_a, &log_b)?;
                // exp is monotone; lifting c ≥ log a back keeps a ≤ a^(m)
                Ok(c.iter().zip(a).map(|(ci, ai)| ci.exp().max(*ai)).collect())
            })
            .collect::<Result<Vec<Vec<f64>>>>()?;
        return Ok(PerturbedMajorants { m0: 0, sequence });
    }

    let r = a.iter().take_while(|&&x| x > 0.0).count();
    let s = b.iter().take_while(|&&x| x > 0.0).count();
    if r > s || s == d {
        return Err(Error::NotLogMajorized);
    }
    let log_prod_a: f64 = a[..r].iter().map(|x| x.ln()).sum();
    let threshold = {
        let ar = if r > 0 { a[r - 1] } else { f64::INFINITY };
        let bs = if s > 0 { b[s - 1] } else { f64::INFINITY };
        ar.min(bs)
    };
    let block = s - r + 1;
    let alphas: Vec<f64> = b_seq
        .iter()
        .map(|bm| {
            let log_prod_b: f64 = bm[..=s].iter().map(|x| x.ln()).sum();
            ((log_prod_b - log_prod_a) / block as f64).exp()
        })
        .collect();
    let m0 = alphas
        .iter()
        .position(|&alpha| alpha <= threshold)
        .ok_or_else(|| {
            Error::PrerequisiteViolated("b_seq never gets close enough to b".into())
        })?;
    let sequence = b_seq[m0..]
        .iter()
        .zip(&alphas[m0..])
        .map(|(bm, &alpha)| {
            let mut am = a[..r].to_vec();
            am.extend(std::iter::repeat_n(alpha, block));
            am.extend_from_slice(&bm[s + 1..]);
            am
        })
        .collect();
    Ok(PerturbedMajorants { m0, sequence })
}

/// The four statements of the implication chain for `λ(A)` against a finite
/// family of spectra with probability weights:
/// strong log-majorization against `exp ∫ log λ`, weak log-majorization
/// against the same, weak log-majorization against `∫ λ`, and weak
/// majorization against `∫ λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainReport {
    pub log_against_log_mean: MajorizationReport,
    pub weak_log_against_log_mean: MajorizationReport,
    pub weak_log_against_mean: MajorizationReport,
    pub weak_against_mean: MajorizationReport,
}

impl ChainReport {
    pub fn statements(&self) -> [bool; 4] {
        [
            self.log_against_log_mean.holds(),
            self.weak_log_against_log_mean.holds(),
            self.weak_log_against_mean.holds(),
            self.weak_against_mean.holds(),
        ]
    }

    /// Each statement that holds is followed by all later ones.
    pub fn chain_consistent(&self) -> bool {
        let s = self.statements();
        (0..3).all(|i| !s[i] || s[i + 1])
    }
}

pub fn implication_chain(
    a: &SpectrumVector,
    samples: &[SpectrumVector],
    weights: &[f64],
    tol: Tolerance,
) -> Result<ChainReport> {
    let log_a = a.log()?;
    let log_mean = integral_log_spectra(samples, weights)?;
    let mean = integral_spectra(samples, weights)?;
    Ok(ChainReport {
        log_against_log_mean: majorize(&log_a, &log_mean, tol)?,
        weak_log_against_log_mean: weak_majorize(&log_a, &log_mean, tol)?,
        weak_log_against_mean: weak_log_majorize(a, &mean, tol)?,
        weak_against_mean: weak_majorize(a, &mean, tol)?,
    })
}

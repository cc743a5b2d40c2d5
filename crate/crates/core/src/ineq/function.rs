use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::major::{gauge_eval, NormSpec, SpectrumVector};

const GRID_POINTS: usize = 200;
const GRID_HALF_WIDTH: f64 = 8.0;
const CONVEXITY_SLACK: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub enum FunctionKind {
    /// `x^p`, `p ≠ 0`.
    Power(f64),
    /// `(α + x)^p`, `α ≥ 0`, `p > 0`.
    ShiftedPower { alpha: f64, p: f64 },
    /// `max(x + α, 0)`.
    HingeShift(f64),
    /// `log(1 + x^p / ε)`.
    LogOnePlus { p: f64, eps: f64 },
    /// `e^x`.
    ExpLinear,
    Custom(String),
}

/// Which transform of the function is required to be convex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConvexityClass {
    /// `x ↦ log f(e^x)` convex.
    LogLogConvex,
    /// `x ↦ g(e^x)` convex.
    GeomConvex,
    /// `f` itself convex on `(0, ∞)`.
    Convex,
}

impl fmt::Display for ConvexityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConvexityClass::LogLogConvex => "loglog",
            ConvexityClass::GeomConvex => "geom",
            ConvexityClass::Convex => "convex",
        })
    }
}

/// Scalar function `[0, ∞) → [0, ∞]` with a verified convexity class.
///
/// Evaluation at 0 returns the continuous extension `f(0+)`, which may be `+inf`.
#[derive(Clone)]
pub struct TestFunction {
    kind: FunctionKind,
    class: ConvexityClass,
    monotone: bool,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("kind", &self.kind)
            .field("class", &self.class)
            .field("monotone", &self.monotone)
            .finish_non_exhaustive()
    }
}

impl PartialEq for TestFunction {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.class == other.class && self.monotone == other.monotone
    }
}

fn positive_power(x: f64, p: f64) -> f64 {
    if x > 0.0 {
        x.powf(p)
    } else if p > 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

impl TestFunction {
    pub fn power(p: f64) -> Result<Self> {
        Self::power_with(p, ConvexityClass::LogLogConvex)
    }

    pub fn power_with(p: f64, class: ConvexityClass) -> Result<Self> {
        if p == 0.0 || !p.is_finite() {
            return Err(Error::BadFunction(format!("power exponent {p}")));
        }
        Self::register(FunctionKind::Power(p), class, p > 0.0, move |x| positive_power(x, p))
    }

    pub fn shifted_power(alpha: f64, p: f64) -> Result<Self> {
        Self::shifted_power_with(alpha, p, ConvexityClass::LogLogConvex)
    }

    pub fn shifted_power_with(alpha: f64, p: f64, class: ConvexityClass) -> Result<Self> {
        if !(alpha >= 0.0) || !(p > 0.0) || !alpha.is_finite() || !p.is_finite() {
            return Err(Error::BadFunction(format!("shifted power ({alpha}, {p})")));
        }
        Self::register(FunctionKind::ShiftedPower { alpha, p }, class, true, move |x| {
            positive_power(alpha + x.max(0.0), p)
        })
    }

    pub fn hinge_shift(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::BadFunction(format!("hinge shift {alpha}")));
        }
        Self::register(FunctionKind::HingeShift(alpha), ConvexityClass::Convex, true, move |x| {
            (x + alpha).max(0.0)
        })
    }

    pub fn log_one_plus(p: f64, eps: f64) -> Result<Self> {
        if !(p > 0.0) || !(eps > 0.0) || !p.is_finite() || !eps.is_finite() {
            return Err(Error::BadFunction(format!("log1p ({p}, {eps})")));
        }
        Self::register(FunctionKind::LogOnePlus { p, eps }, ConvexityClass::GeomConvex, true, move |x| {
            (positive_power(x, p) / eps).ln_1p()
        })
    }

    pub fn exp_linear(class: ConvexityClass) -> Result<Self> {
        Self::register(FunctionKind::ExpLinear, class, true, f64::exp)
    }

    pub fn custom<F>(name: impl Into<String>, class: ConvexityClass, monotone: bool, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::register(FunctionKind::Custom(name.into()), class, monotone, f)
    }

    fn register<F>(kind: FunctionKind, class: ConvexityClass, monotone: bool, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let function = Self {
            kind,
            class,
            monotone,
            eval: Arc::new(f),
        };
        function.verify()?;
        Ok(function)
    }

    pub fn kind(&self) -> &FunctionKind {
        &self.kind
    }

    pub fn class(&self) -> ConvexityClass {
        self.class
    }

    pub fn monotone(&self) -> bool {
        self.monotone
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    /// `f(0+) = +inf`.
    pub fn singular_at_zero(&self) -> bool {
        self.eval(0.0) == f64::INFINITY
    }

    /// `Φ(f(λ))` for a non-negative spectrum; `+inf` when `f` blows up on a zero eigenvalue.
    pub fn gauge_of(&self, norm: &NormSpec, spectrum: &SpectrumVector) -> Result<f64> {
        let mapped: Vec<f64> = spectrum.values().iter().map(|&x| self.eval(x)).collect();
        if mapped.contains(&f64::INFINITY) {
            return Ok(f64::INFINITY);
        }
        if let Some(i) = mapped.iter().position(|v| !(*v >= 0.0)) {
            return Err(Error::BadFunction(format!("{self} is negative or undefined at {}", spectrum.values()[i])));
        }
        gauge_eval(norm, &SpectrumVector::from_unsorted(mapped)?)
    }

    /// Samples the class transform on the uniform grid of 200 points over
    /// `[-8, 8]` (that is, at `e^x`) and checks its second differences, and
    /// first differences of `f` when declared monotone.
    fn verify(&self) -> Result<()> {
        let h = 2.0 * GRID_HALF_WIDTH / (GRID_POINTS - 1) as f64;
        let mut xs: Vec<f64> = (0..GRID_POINTS).map(|i| -GRID_HALF_WIDTH + i as f64 * h).collect();
        let mut raw: Vec<f64> = xs.iter().map(|x| self.eval(x.exp())).collect();
        // drop a trailing overflow tail such as exp(e^8)
        if let Some(first_inf) = raw.iter().position(|v| *v == f64::INFINITY) {
            if first_inf >= 3 && raw[first_inf..].iter().all(|v| *v == f64::INFINITY) {
                raw.truncate(first_inf);
                xs.truncate(first_inf);
            }
        }
        let n = raw.len();
        if let Some(i) = raw.iter().position(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::BadFunction(format!(
                "{self} is not finite and non-negative at {}",
                xs[i].exp()
            )));
        }
        let bad_curvature = |i: usize, second: f64| {
            Error::BadFunction(format!(
                "{self} fails the {} convexity check near {} (second difference {second:e})",
                self.class,
                xs[i].exp()
            ))
        };
        match self.class {
            ConvexityClass::LogLogConvex | ConvexityClass::GeomConvex => {
                let phi: Vec<f64> = if self.class == ConvexityClass::LogLogConvex {
                    raw.iter().map(|v| v.ln()).collect()
                } else {
                    raw.clone()
                };
                for i in 1..n - 1 {
                    let second = phi[i + 1] - 2.0 * phi[i] + phi[i - 1];
                    let scale = phi[i - 1].abs().max(phi[i].abs()).max(phi[i + 1].abs()).max(1.0);
                    if phi[i].is_finite() && second < -CONVEXITY_SLACK * scale {
                        return Err(bad_curvature(i, second));
                    }
                }
            }
            ConvexityClass::Convex => {
                // divided differences on the non-uniform points e^x
                let s: Vec<f64> = xs.iter().map(|x| x.exp()).collect();
                for i in 1..n - 1 {
                    let left = (raw[i] - raw[i - 1]) / (s[i] - s[i - 1]);
                    let right = (raw[i + 1] - raw[i]) / (s[i + 1] - s[i]);
                    let second = right - left;
                    let scale = left.abs().max(right.abs()).max(1.0);
                    if second < -CONVEXITY_SLACK * scale {
                        return Err(bad_curvature(i, second));
                    }
                }
            }
        }
        if self.monotone {
            for i in 1..n {
                let scale = raw[i].abs().max(1.0);
                if raw[i] - raw[i - 1] < -CONVEXITY_SLACK * scale {
                    return Err(Error::BadFunction(format!("{self} is declared monotone but decreases")));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FunctionKind::Power(p) => write!(f, "pow:{p}"),
            FunctionKind::ShiftedPower { alpha, p } => write!(f, "shiftpow:{alpha}:{p}"),
            FunctionKind::HingeShift(alpha) => write!(f, "hinge:{alpha}"),
            FunctionKind::LogOnePlus { p, eps } => write!(f, "log1p:{p}:{eps}"),
            FunctionKind::ExpLinear => f.write_str("exp"),
            FunctionKind::Custom(name) => write!(f, "custom:{name}"),
        }
    }
}

impl FromStr for TestFunction {
    type Err = Error;

    /// `pow:p`, `shiftpow:alpha:p`, `log1p:p:eps`, `hinge:alpha`, `exp`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadFunction(format!("cannot parse function spec `{s}`"));
        let mut parts = s.split(':');
        let head = parts.next().ok_or_else(bad)?;
        let args: Vec<f64> = parts
            .map(|a| a.parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match (head, args.as_slice()) {
            ("pow", [p]) => TestFunction::power(*p),
            ("shiftpow", [alpha, p]) => TestFunction::shifted_power(*alpha, *p),
            ("log1p", [p, eps]) => TestFunction::log_one_plus(*p, *eps),
            ("hinge", [alpha]) => TestFunction::hinge_shift(*alpha),
            ("exp", []) => TestFunction::exp_linear(ConvexityClass::GeomConvex),
            _ => Err(bad()),
        }
    }
}

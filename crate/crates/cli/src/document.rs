//! Machine-readable report documents. Finite numbers are written with 17
//! significant digits; non-finite values are the strings `inf`, `-inf`, `nan`.

use serde::de::Error as _;
use serde::ser::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use logmaj::ineq::{InequalityReport, SideCheck, TraceEntry, Verdict};

/// `f64` with the document number format. NaN compares equal to NaN.
#[derive(Clone, Copy, Debug)]
pub struct Real(pub f64);

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0 || (self.0.is_nan() && other.0.is_nan())
    }
}

impl From<f64> for Real {
    fn from(x: f64) -> Self {
        Real(x)
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let x = self.0;
        if x.is_nan() {
            s.serialize_str("nan")
        } else if x.is_infinite() {
            s.serialize_str(if x > 0.0 { "inf" } else { "-inf" })
        } else {
            let digits: serde_json::Number = format!("{x:.16e}").parse().map_err(S::Error::custom)?;
            digits.serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n
                .as_f64()
                .map(Real)
                .ok_or_else(|| D::Error::custom(format!("number {n} is not a double"))),
            serde_json::Value::String(s) => match s.as_str() {
                "inf" => Ok(Real(f64::INFINITY)),
                "-inf" => Ok(Real(f64::NEG_INFINITY)),
                "nan" => Ok(Real(f64::NAN)),
                other => Err(D::Error::custom(format!("expected a number, got `{other}`"))),
            },
            other => Err(D::Error::custom(format!("expected a number, got {other}"))),
        }
    }
}

fn reals(values: &[f64]) -> Vec<Real> {
    values.iter().copied().map(Real).collect()
}

mod verdict_text {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Verdict, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Verdict, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputsDoc {
    /// SHA-256 of the canonical matrix document.
    pub digest: String,
    /// `file` or `random`.
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<u64>,
    pub dim: usize,
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Real>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ParamsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Real>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub thetas: Vec<Real>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Real>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<String>,
    #[serde(default, rename = "fn", skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub p_values: Vec<Real>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<Real>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad_tol: Option<Real>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<Real>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_bound: Option<Real>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckDoc {
    pub name: String,
    pub lhs: Real,
    pub rhs: Real,
    pub margin: Real,
    pub error_budget: Real,
    #[serde(with = "verdict_text")]
    pub verdict: Verdict,
}

impl CheckDoc {
    pub fn from_side(c: &SideCheck) -> Self {
        Self {
            name: c.name.clone(),
            lhs: Real(c.lhs),
            rhs: Real(c.rhs),
            margin: Real(c.margin),
            error_budget: Real(c.error_budget),
            verdict: c.verdict,
        }
    }

    pub fn from_report(name: impl Into<String>, r: &InequalityReport) -> Self {
        Self {
            name: name.into(),
            lhs: Real(r.lhs),
            rhs: Real(r.rhs),
            margin: Real(r.margin),
            error_budget: Real(r.error_budget),
            verdict: r.overall(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceDoc {
    pub t: Real,
    pub weight: Real,
    pub values: Vec<Real>,
}

impl From<&TraceEntry> for TraceDoc {
    fn from(e: &TraceEntry) -> Self {
        Self {
            t: Real(e.t),
            weight: Real(e.weight),
            values: reals(&e.values),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub command: String,
    pub inputs: InputsDoc,
    pub parameters: ParamsDoc,
    pub lhs: Real,
    pub rhs: Real,
    pub margin: Real,
    pub error_budget: Real,
    /// Worst verdict over the main inequality and every side check.
    #[serde(with = "verdict_text")]
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub side_checks: Vec<CheckDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceDoc>>,
}

impl ReportDocument {
    /// Main inequality from `r`, with its side checks and optional trace.
    pub fn from_report(command: &str, inputs: InputsDoc, parameters: ParamsDoc, r: &InequalityReport, trace: bool) -> Self {
        Self {
            command: command.to_string(),
            inputs,
            parameters,
            lhs: Real(r.lhs),
            rhs: Real(r.rhs),
            margin: Real(r.margin),
            error_budget: Real(r.error_budget),
            verdict: r.overall(),
            side_checks: r.side_checks.iter().map(CheckDoc::from_side).collect(),
            witness: None,
            trace: trace.then(|| r.trace.iter().map(TraceDoc::from).collect()),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictCounts {
    pub holds: usize,
    pub inconclusive: usize,
    pub violated: usize,
}

impl VerdictCounts {
    pub fn add(&mut self, v: Verdict) {
        match v {
            Verdict::Holds => self.holds += 1,
            Verdict::Inconclusive => self.inconclusive += 1,
            Verdict::Violated => self.violated += 1,
        }
    }

    pub fn worst(&self) -> Verdict {
        if self.violated > 0 {
            Verdict::Violated
        } else if self.inconclusive > 0 {
            Verdict::Inconclusive
        } else {
            Verdict::Holds
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub parameters: ParamsDoc,
    pub samples: usize,
    pub min_margin: Real,
    pub median_margin: Real,
    /// Seed offset of the sample with the smallest margin.
    pub argmin_offset: u64,
    pub counts: VerdictCounts,
    /// Samples that stopped with an error, with the offset and message.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<(u64, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanDocument {
    pub command: String,
    pub seed: u64,
    pub samples: usize,
    pub dim: usize,
    pub family: usize,
    pub rows: Vec<ScanRow>,
    #[serde(with = "verdict_text")]
    pub verdict: Verdict,
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> serde_json::Result<T> {
    serde_json::from_str(text)
}

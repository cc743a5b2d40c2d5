//! Dispatch from a validated configuration to the verifiers.

use logmaj::ineq::{
    alt_log_majorization, alt_norm_check, char_by_power_norms, constructed_instance, corollary_function_check,
    equivalence_harness, gt_limit_check, hirschman_check, lie_trotter_residual, p_limit_check, trace_power_check,
    CharMode, InequalityReport, MatrixFamily, TestFunction, Verdict, DEFAULT_P_GRID,
};
use logmaj::major::{check_mode, MajorizationMode, NormSpec, SpectrumVector, Tolerance};
use logmaj::measure::{DiscreteMeasure, ThetaRule};
use logmaj::random::{seeded_rng, wishart_family};
use logmaj::spectral::PsdMatrix;

use crate::config::{CheckKind, CheckParams, RandomSource};
use crate::document::{CheckDoc, InputsDoc, ParamsDoc, Real, ReportDocument, TraceDoc};
use crate::error::{CliError, CliResult};
use crate::matrix_file::{LoadedMatrices, MatrixFileDocument};

const LIE_TROTTER_GRID: [f64; 4] = [0.5, 0.1, 0.01, 0.001];

/// Matrices and optional atom weights for one check, with their description.
#[derive(Clone, Debug)]
pub struct CheckInput {
    pub matrices: Vec<PsdMatrix>,
    pub weights: Option<Vec<f64>>,
    pub inputs: InputsDoc,
}

impl CheckInput {
    pub fn from_file(loaded: LoadedMatrices, path: &str) -> Self {
        let d = loaded.matrices[0].dim();
        Self {
            inputs: InputsDoc {
                digest: loaded.digest,
                source: "file".into(),
                path: Some(path.to_string()),
                seed: None,
                offset: None,
                dim: d,
                count: loaded.matrices.len(),
                weights: loaded.weights.as_ref().map(|w| w.iter().copied().map(Real).collect()),
            },
            matrices: loaded.matrices,
            weights: loaded.weights,
        }
    }
}

pub fn validate_source(source: &RandomSource) -> CliResult<()> {
    if source.dim == 0 || source.family == 0 {
        return Err(CliError::Config("--dim and --family must be at least 1".into()));
    }
    Ok(())
}

/// Seeded Wishart family for `(seed, offset)`. `char` draws a pair; `equiv`
/// draws a constructed instance whose first matrix is `A`.
pub fn random_input(kind: CheckKind, params: &CheckParams, source: &RandomSource, offset: u64) -> CliResult<CheckInput> {
    validate_source(source)?;
    let mut rng = seeded_rng(source.seed, offset);
    let (matrices, weights) = match kind {
        CheckKind::Equiv => {
            let inst = constructed_instance(&mut rng, params.relation, source.dim, source.family)?;
            let mut all = vec![inst.a];
            all.extend(inst.bs);
            (all, Some(inst.measure.weights().to_vec()))
        }
        CheckKind::Char => (wishart_family(&mut rng, 2, source.dim), None),
        _ => (wishart_family(&mut rng, source.family, source.dim), None),
    };
    let mut doc = MatrixFileDocument::from_matrices(&matrices);
    doc.weights = weights.as_ref().map(|w| w.iter().copied().map(Real).collect());
    Ok(CheckInput {
        inputs: InputsDoc {
            digest: doc.digest(),
            source: "random".into(),
            path: None,
            seed: Some(source.seed),
            offset: Some(offset),
            dim: source.dim,
            count: matrices.len(),
            weights: doc.weights,
        },
        matrices,
        weights,
    })
}

fn single_theta(params: &CheckParams, default: f64) -> CliResult<f64> {
    match params.theta.as_slice() {
        [] => Ok(default),
        [theta] => Ok(*theta),
        _ => Err(CliError::Config("this check takes a single --theta".into())),
    }
}

fn rule_params(rule: &ThetaRule, quad_tol: f64) -> ParamsDoc {
    ParamsDoc {
        theta: Some(Real(rule.theta())),
        quad_tol: Some(Real(quad_tol)),
        truncation: Some(Real(rule.truncation())),
        tail_bound: Some(Real(rule.tail_bound())),
        ..ParamsDoc::default()
    }
}

fn prefix_sums(v: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    v.iter()
        .map(|&x| {
            acc = if acc == f64::NEG_INFINITY { acc } else { acc + x };
            acc
        })
        .collect()
}

fn worst_prefix(margins: &[f64]) -> usize {
    (0..margins.len())
        .min_by(|&i, &j| margins[i].total_cmp(&margins[j]))
        .expect("non-empty")
}

fn check_doc(name: &str, lhs: f64, rhs: f64, margin: f64, budget: f64, verdict: Verdict) -> CheckDoc {
    CheckDoc {
        name: name.into(),
        lhs: Real(lhs),
        rhs: Real(rhs),
        margin: Real(margin),
        error_budget: Real(budget),
        verdict,
    }
}

/// Runs `kind` on `input`; the document verdict is the worst over every
/// evaluated assertion.
pub fn run_check(kind: CheckKind, params: &CheckParams, input: &CheckInput, trace: bool) -> CliResult<ReportDocument> {
    let command = format!("check {}", kind.name());
    let inputs = input.inputs.clone();
    let family = || -> CliResult<MatrixFamily> { Ok(MatrixFamily::new(input.matrices.clone())?) };
    let from_report = |mut p: ParamsDoc, r: &InequalityReport, norm: Option<&NormSpec>, f: Option<&TestFunction>| {
        p.norm = norm.map(ToString::to_string);
        p.function = f.map(ToString::to_string);
        ReportDocument::from_report(&command, inputs.clone(), p, r, trace)
    };
    match kind {
        CheckKind::Alt => {
            let rule = ThetaRule::new(single_theta(params, 0.5)?, params.quad_tol)?;
            let r = alt_norm_check(&family()?, &rule, &params.norm)?;
            Ok(from_report(rule_params(&rule, params.quad_tol), &r, Some(&params.norm), None))
        }
        CheckKind::Corollary => {
            let rule = ThetaRule::new(single_theta(params, 0.5)?, params.quad_tol)?;
            let r = corollary_function_check(&family()?, &rule, &params.function, &params.norm)?;
            Ok(from_report(
                rule_params(&rule, params.quad_tol),
                &r,
                Some(&params.norm),
                Some(&params.function),
            ))
        }
        CheckKind::TracePower => {
            let rule = ThetaRule::new(single_theta(params, 0.5)?, params.quad_tol)?;
            let r = trace_power_check(&family()?, &rule, params.q)?;
            let mut p = rule_params(&rule, params.quad_tol);
            p.q = Some(Real(params.q));
            Ok(from_report(p, &r, None, None))
        }
        CheckKind::Gt => {
            let rule = ThetaRule::new(0.0, params.quad_tol)?;
            let r = gt_limit_check(&family()?, &rule, &params.function, &params.norm)?;
            Ok(from_report(
                rule_params(&rule, params.quad_tol),
                &r,
                Some(&params.norm),
                Some(&params.function),
            ))
        }
        CheckKind::Hirschman => {
            let theta = single_theta(params, 0.5)?;
            let r = hirschman_check(&family()?, theta, params.quad_tol)?;
            let p = ParamsDoc {
                theta: Some(Real(theta)),
                quad_tol: Some(Real(params.quad_tol)),
                ..ParamsDoc::default()
            };
            Ok(from_report(p, &r, None, None))
        }
        CheckKind::Logmaj => run_logmaj(command, inputs, params, &family()?, trace),
        CheckKind::LieTrotter => run_lie_trotter(command, inputs, params, &family()?, trace),
        CheckKind::Char => run_char(command, inputs, params, input),
        CheckKind::Equiv => run_equiv(command, inputs, params, input),
        CheckKind::Plimit => run_plimit(command, inputs, params, input),
    }
}

fn run_logmaj(
    command: String,
    inputs: InputsDoc,
    params: &CheckParams,
    family: &MatrixFamily,
    trace: bool,
) -> CliResult<ReportDocument> {
    let rule = ThetaRule::new(single_theta(params, 0.5)?, params.quad_tol)?;
    let r = alt_log_majorization(family, &rule)?;
    let margins = &r.majorization.partial_margins;
    let lhs = prefix_sums(r.lhs.values());
    let rhs = prefix_sums(r.rhs.values());
    let k = worst_prefix(margins);
    let budget = r.error_budget;
    let mut side_checks: Vec<CheckDoc> = (0..margins.len())
        .map(|i| {
            let v = Verdict::classify(margins[i], budget);
            check_doc(&format!("prefix k={}", i + 1), lhs[i], rhs[i], margins[i], budget, v)
        })
        .collect();
    let d = margins.len() - 1;
    let total = -margins[d].abs();
    side_checks.push(check_doc("total equality", lhs[d], rhs[d], total, budget, Verdict::classify(total, budget)));
    side_checks.extend(r.side_checks.iter().map(CheckDoc::from_side));
    let chain_names = ["chain log", "chain weak log", "chain weak log mean", "chain weak mean"];
    for (name, holds) in chain_names.iter().zip(r.chain.statements()) {
        let v = if holds { Verdict::Holds } else { Verdict::Violated };
        let flag = if holds { 1.0 } else { 0.0 };
        side_checks.push(check_doc(name, flag, 1.0, flag - 1.0, 0.0, v));
    }
    Ok(ReportDocument {
        command,
        inputs,
        parameters: rule_params(&rule, params.quad_tol),
        lhs: Real(lhs[k]),
        rhs: Real(rhs[k]),
        margin: Real(margins[k]),
        error_budget: Real(budget),
        verdict: r.verdict(),
        side_checks,
        witness: None,
        trace: trace.then(|| r.trace.iter().map(TraceDoc::from).collect()),
    })
}

/// The residual at the smallest θ must not exceed the residual at the largest.
fn run_lie_trotter(
    command: String,
    inputs: InputsDoc,
    params: &CheckParams,
    family: &MatrixFamily,
    trace: bool,
) -> CliResult<ReportDocument> {
    let thetas = if params.theta.is_empty() {
        LIE_TROTTER_GRID.to_vec()
    } else {
        params.theta.clone()
    };
    if thetas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(CliError::Config("lie-trotter needs a decreasing --theta grid".into()));
    }
    let residuals = lie_trotter_residual(family, &thetas)?;
    let first = residuals[0].1;
    let last = residuals[residuals.len() - 1].1;
    let budget = 1e-9 * family.dim() as f64 * first.max(1.0);
    let r = InequalityReport::new(last, first, budget);
    let mut doc = ReportDocument::from_report(
        &command,
        inputs,
        ParamsDoc {
            thetas: thetas.iter().copied().map(Real).collect(),
            ..ParamsDoc::default()
        },
        &r,
        false,
    );
    doc.trace = trace.then(|| {
        residuals
            .iter()
            .map(|&(theta, res)| TraceDoc {
                t: Real(theta),
                weight: Real(1.0),
                values: vec![Real(res)],
            })
            .collect()
    });
    Ok(doc)
}

fn run_char(command: String, inputs: InputsDoc, params: &CheckParams, input: &CheckInput) -> CliResult<ReportDocument> {
    let [a, b] = input.matrices.as_slice() else {
        return Err(CliError::Config("char needs exactly two matrices (A, B)".into()));
    };
    let mode = match params.mode {
        MajorizationMode::WeakLog => CharMode::Weak,
        MajorizationMode::Log => CharMode::Strong,
        other => return Err(CliError::Config(format!("char takes --mode weaklog or log, not {other}"))),
    };
    let r = char_by_power_norms(a, b, &DEFAULT_P_GRID, mode)?;
    let worst = r
        .grid
        .iter()
        .min_by(|x, y| x.margin.total_cmp(&y.margin))
        .copied()
        .expect("non-empty grid");
    let f = TestFunction::power(worst.p)?;
    let norm = NormSpec::KyFan(worst.k);
    let lhs = f.gauge_of(&norm, a.eigenvalues())?.ln();
    let rhs = f.gauge_of(&norm, b.eigenvalues())?.ln();
    let agreement = if r.agreement { Verdict::Holds } else { Verdict::Violated };
    let predicate_margin = r.predicate.min_margin();
    let side_checks = vec![
        check_doc(
            "predicate",
            0.0,
            predicate_margin,
            predicate_margin,
            r.predicate.tol,
            Verdict::classify(predicate_margin, r.predicate.tol),
        ),
        check_doc(
            "grid",
            0.0,
            worst.margin,
            worst.margin,
            r.grid_tol,
            Verdict::classify(worst.margin, r.grid_tol),
        ),
    ];
    Ok(ReportDocument {
        command,
        inputs,
        parameters: ParamsDoc {
            mode: Some(params.mode.to_string()),
            p_values: DEFAULT_P_GRID.iter().copied().map(Real).collect(),
            tol: Some(Real(r.grid_tol)),
            ..ParamsDoc::default()
        },
        lhs: Real(lhs),
        rhs: Real(rhs),
        margin: Real(worst.margin),
        error_budget: Real(r.grid_tol),
        verdict: agreement,
        side_checks,
        witness: r.witness.map(|w| format!("p={} k={}", w.p, w.k)),
        trace: None,
    })
}

fn run_equiv(command: String, inputs: InputsDoc, params: &CheckParams, input: &CheckInput) -> CliResult<ReportDocument> {
    let [a, bs @ ..] = input.matrices.as_slice() else {
        unreachable!("inputs are non-empty")
    };
    if bs.is_empty() {
        return Err(CliError::Config("equiv needs A followed by at least one atom".into()));
    }
    let measure = match &input.weights {
        Some(w) => DiscreteMeasure::new(w.clone())?,
        None => DiscreteMeasure::uniform(bs.len())?,
    };
    let r = equivalence_harness(a, bs, &measure, params.relation, params.direction)?;
    let tight = r.tightest().expect("every relation has probes");
    let verdict = if r.consistent {
        Verdict::Holds
    } else if r.checks.iter().any(|c| c.report.verdict == Verdict::Violated) || r.predicate.holds() {
        Verdict::Violated
    } else {
        Verdict::Inconclusive
    };
    let predicate_margin = r.predicate.min_margin();
    let mut side_checks = vec![check_doc(
        "predicate",
        0.0,
        predicate_margin,
        predicate_margin,
        r.predicate.tol,
        Verdict::classify(predicate_margin, r.predicate.tol),
    )];
    side_checks.extend(r.checks.iter().map(|c| CheckDoc::from_report(c.label.clone(), &c.report)));
    Ok(ReportDocument {
        command,
        inputs,
        parameters: ParamsDoc {
            relation: Some(params.relation.to_string()),
            direction: Some(params.direction.to_string()),
            ..ParamsDoc::default()
        },
        lhs: Real(tight.report.lhs),
        rhs: Real(tight.report.rhs),
        margin: Real(tight.report.margin),
        error_budget: Real(tight.report.error_budget),
        verdict,
        side_checks,
        witness: r.witness.clone(),
        trace: None,
    })
}

fn run_plimit(command: String, inputs: InputsDoc, params: &CheckParams, input: &CheckInput) -> CliResult<ReportDocument> {
    let mut side_checks = Vec::new();
    let mut worst: Option<(f64, f64, f64)> = None;
    for (i, b) in input.matrices.iter().enumerate() {
        let r = p_limit_check(b, &params.p_seq, params.limit_tol)?;
        let last = r.values[r.values.len() - 1];
        let margin = -r.gap;
        side_checks.push(check_doc(
            &format!("limit {i}"),
            last,
            r.limit,
            margin,
            r.tol,
            Verdict::classify(margin, r.tol),
        ));
        let monotone = if r.monotone { Verdict::Holds } else { Verdict::Violated };
        let flag = if r.monotone { 1.0 } else { 0.0 };
        side_checks.push(check_doc(&format!("monotone {i}"), flag, 1.0, flag - 1.0, 0.0, monotone));
        if worst.is_none_or(|w| margin < w.2) {
            worst = Some((last, r.limit, margin));
        }
    }
    let (lhs, rhs, margin) = worst.expect("non-empty input");
    Ok(ReportDocument {
        command,
        inputs,
        parameters: ParamsDoc {
            p_values: params.p_seq.iter().copied().map(Real).collect(),
            tol: Some(Real(params.limit_tol)),
            ..ParamsDoc::default()
        },
        lhs: Real(lhs),
        rhs: Real(rhs),
        margin: Real(margin),
        error_budget: Real(params.limit_tol),
        verdict: Verdict::worst(side_checks.iter().map(|c| c.verdict)),
        side_checks,
        witness: None,
        trace: None,
    })
}

/// Reads a vector argument of `majorize`: a JSON array of numbers, or a
/// matrix document whose first matrix supplies its eigenvalues.
pub fn load_vector(path: &std::path::Path) -> CliResult<(SpectrumVector, String)> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let parse_error = |message: String| CliError::Parse {
        path: path.to_path_buf(),
        message,
    };
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| parse_error(e.to_string()))?;
    if value.is_array() {
        let entries: Vec<Real> = serde_json::from_value(value).map_err(|e| parse_error(e.to_string()))?;
        let values: Vec<f64> = entries.iter().map(|r| r.0).collect();
        let digest = crate::matrix_file::digest_text(&crate::document::to_json(&entries));
        let v = SpectrumVector::from_unsorted(values).map_err(|e| parse_error(e.to_string()))?;
        Ok((v, digest))
    } else {
        let loaded = crate::matrix_file::parse_matrices(&text, path)?;
        Ok((loaded.matrices[0].eigenvalues().clone(), loaded.digest))
    }
}

/// `majorize a b --mode`: the main inequality is the worst prefix.
pub fn run_majorize(a: &std::path::Path, b: &std::path::Path, mode: MajorizationMode) -> CliResult<ReportDocument> {
    let (va, da) = load_vector(a)?;
    let (vb, db) = load_vector(b)?;
    let r = check_mode(&va, &vb, mode, Tolerance::Auto)?;
    let (la, lb) = match mode {
        MajorizationMode::Weak | MajorizationMode::Strong => (va.values().to_vec(), vb.values().to_vec()),
        MajorizationMode::WeakLog | MajorizationMode::Log => (va.log_values()?, vb.log_values()?),
    };
    let (pa, pb) = (prefix_sums(&la), prefix_sums(&lb));
    let margins = &r.partial_margins;
    let k = worst_prefix(margins);
    let mut side_checks: Vec<CheckDoc> = (0..margins.len())
        .map(|i| {
            let v = Verdict::classify(margins[i], r.tol);
            check_doc(&format!("prefix k={}", i + 1), pa[i], pb[i], margins[i], r.tol, v)
        })
        .collect();
    if matches!(mode, MajorizationMode::Strong | MajorizationMode::Log) {
        let d = margins.len() - 1;
        let total = -margins[d].abs();
        side_checks.push(check_doc("total equality", pa[d], pb[d], total, r.tol, Verdict::classify(total, r.tol)));
    }
    let verdict = if r.holds() { Verdict::Holds } else { Verdict::Violated };
    let count = va.len();
    Ok(ReportDocument {
        command: "majorize".into(),
        inputs: InputsDoc {
            digest: crate::matrix_file::digest_text(&format!("{da}{db}")),
            source: "file".into(),
            path: Some(format!("{} {}", a.display(), b.display())),
            seed: None,
            offset: None,
            dim: count,
            count: 2,
            weights: None,
        },
        parameters: ParamsDoc {
            mode: Some(mode.to_string()),
            tol: Some(Real(r.tol)),
            ..ParamsDoc::default()
        },
        lhs: Real(pa[k]),
        rhs: Real(pb[k]),
        margin: Real(margins[k]),
        error_budget: Real(r.tol),
        verdict,
        side_checks,
        witness: match r.verdict {
            logmaj::major::MajorizationVerdict::Holds => None,
            logmaj::major::MajorizationVerdict::FailsAtK(k) => Some(format!("k={k}")),
            logmaj::major::MajorizationVerdict::EqualityFailsAtD => Some("total".into()),
        },
        trace: None,
    })
}

/// Side checks are part of every verdict, so a violated report can be traced
/// back to its cause.
pub fn failing_checks(doc: &ReportDocument) -> Vec<&CheckDoc> {
    doc.side_checks.iter().filter(|c| c.verdict != Verdict::Holds).collect()
}

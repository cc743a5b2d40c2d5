//! Seeded sweeps: one check over many random families.

use rayon::prelude::*;

use logmaj::ineq::Verdict;

use crate::config::{CheckKind, CheckParams, RandomSource};
use crate::document::{ParamsDoc, Real, ReportDocument, ScanDocument, ScanRow, VerdictCounts};
use crate::error::CliResult;
use crate::run::{random_input, run_check, validate_source};

/// Sample `i` of a scan is `check --seed S --offset i`.
pub fn run_sample(kind: CheckKind, params: &CheckParams, source: &RandomSource, offset: u64) -> CliResult<ReportDocument> {
    let input = random_input(kind, params, source, offset)?;
    run_check(kind, params, &input, false)
}

fn theta_rows(kind: CheckKind, params: &CheckParams) -> Vec<CheckParams> {
    if params.theta.len() <= 1 || kind == CheckKind::LieTrotter {
        return vec![params.clone()];
    }
    params
        .theta
        .iter()
        .map(|&theta| CheckParams {
            theta: vec![theta],
            ..params.clone()
        })
        .collect()
}

fn summarize(row_params: ParamsDoc, results: Vec<(u64, CliResult<ReportDocument>)>) -> ScanRow {
    let mut counts = VerdictCounts::default();
    let mut margins: Vec<(f64, u64)> = Vec::new();
    let mut errors = Vec::new();
    for (offset, result) in results {
        match result {
            Ok(doc) => {
                counts.add(doc.verdict);
                margins.push((doc.margin.0, offset));
            }
            Err(e) => {
                counts.add(Verdict::Violated);
                errors.push((offset, e.to_string()));
            }
        }
    }
    let argmin = margins.iter().min_by(|x, y| x.0.total_cmp(&y.0)).copied();
    let mut sorted: Vec<f64> = margins.iter().map(|m| m.0).collect();
    sorted.sort_by(f64::total_cmp);
    let median = match sorted.len() {
        0 => f64::NAN,
        n if n % 2 == 1 => sorted[n / 2],
        n => 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]),
    };
    ScanRow {
        parameters: row_params,
        samples: margins.len() + errors.len(),
        min_margin: Real(argmin.map_or(f64::NAN, |m| m.0)),
        median_margin: Real(median),
        argmin_offset: argmin.map_or(0, |m| m.1),
        counts,
        errors,
    }
}

/// Runs `samples` offsets per θ row in parallel. Rows and their statistics do
/// not depend on the thread count.
pub fn run_scan(kind: CheckKind, params: &CheckParams, source: &RandomSource, samples: usize) -> CliResult<ScanDocument> {
    validate_source(source)?;
    let rows: Vec<ScanRow> = theta_rows(kind, params)
        .into_iter()
        .map(|row| {
            let results: Vec<(u64, CliResult<ReportDocument>)> = (0..samples as u64)
                .into_par_iter()
                .map(|offset| (offset, run_sample(kind, &row, source, offset)))
                .collect();
            let row_params = results
                .iter()
                .find_map(|(_, r)| r.as_ref().ok().map(|d| d.parameters.clone()))
                .unwrap_or_default();
            summarize(row_params, results)
        })
        .collect();
    let verdict = Verdict::worst(rows.iter().map(|r| r.counts.worst()));
    Ok(ScanDocument {
        command: format!("scan {}", kind.name()),
        seed: source.seed,
        samples,
        dim: source.dim,
        family: source.family,
        rows,
        verdict,
    })
}

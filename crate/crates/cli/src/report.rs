//! Versioned JSON and CSV renderings of coefficients, sweeps and verdicts.

use progc_core::{CoefficientResult, GridKey, SweepReport, VariabilityCurve};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliResult;
use crate::manifest::MANIFEST_FILE;

pub const COEFF_SCHEMA: &str = "progc.coeff/1";
pub const CURVE_SCHEMA: &str = "progc.curve/1";
pub const SWEEP_CSV_SCHEMA: &str = "progc.sweep-table/1";
pub const SWEEP_SCHEMA: &str = "progc.sweep/1";
pub const COMPARE_SCHEMA: &str = "progc.compare/1";
pub const EVOLVE_SCHEMA: &str = "progc.evolve/1";

/// Where a zero band came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EpsilonSource {
    /// `--epsilon` on the command line.
    User,
    /// Twice the largest |C| of the inert systems on the same grid.
    InertCalibration,
}

fn pretty(value: &Value) -> CliResult<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn schema_line(schema: &str) -> String {
    format!("# schema={schema} manifest={MANIFEST_FILE}\n")
}

/// JSON document for a single coefficient.
pub fn coeff_json(
    res: &CoefficientResult,
    epsilon: f64,
    source: EpsilonSource,
    zero_computer: bool,
    computes: bool,
) -> CliResult<Vec<u8>> {
    pretty(&json!({
        "schema": COEFF_SCHEMA,
        "manifest": MANIFEST_FILE,
        "model_id": res.params.model_id,
        "c_value": res.c_value,
        "fit": res.fit,
        "params": res.params,
        "epsilon": epsilon,
        "epsilon_source": source,
        "zero_computer": zero_computer,
        "computes": computes,
    }))
}

/// `t_prime,S` table of a variability curve.
pub fn curve_csv(curve: &VariabilityCurve) -> CliResult<Vec<u8>> {
    let mut out = schema_line(CURVE_SCHEMA).into_bytes();
    let mut w = csv::Writer::from_writer(&mut out);
    w.write_record(["t_prime", "S"]).map_err(anyhow::Error::from)?;
    for p in &curve.points {
        w.write_record([p.t.to_string(), p.s.to_string()])
            .map_err(anyhow::Error::from)?;
    }
    w.flush()?;
    drop(w);
    Ok(out)
}

/// 256-row table: rule, c_value, rmse, rank (1 = largest), cluster.
pub fn sweep_csv(report: &SweepReport) -> CliResult<Vec<u8>> {
    let mut out = schema_line(SWEEP_CSV_SCHEMA).into_bytes();
    let mut w = csv::Writer::from_writer(&mut out);
    w.write_record(["rule", "c_value", "rmse", "rank", "cluster"])
        .map_err(anyhow::Error::from)?;
    for e in &report.entries {
        w.write_record([
            e.rule.to_string(),
            e.result.c_value.to_string(),
            e.result.fit.rmse.to_string(),
            (report.rank_of(e.rule) + 1).to_string(),
            report.cluster_of(e.rule).to_string(),
        ])
        .map_err(anyhow::Error::from)?;
    }
    w.flush()?;
    drop(w);
    Ok(out)
}

/// JSON mirror of the sweep table with ranking, clusters and the R30 grouping.
pub fn sweep_json(report: &SweepReport, source: EpsilonSource) -> CliResult<Vec<u8>> {
    let (q1, median, q3) = report.quartiles();
    let r30 = report.inert_grouping(30);
    let entries: Vec<Value> = report
        .entries
        .iter()
        .map(|e| {
            json!({
                "rule": e.rule,
                "c_value": e.result.c_value,
                "fit": e.result.fit,
                "rank": report.rank_of(e.rule) + 1,
                "cluster": report.cluster_of(e.rule),
                "curve": e.result.curve.points,
            })
        })
        .collect();
    pretty(&json!({
        "schema": SWEEP_SCHEMA,
        "manifest": MANIFEST_FILE,
        "epsilon": report.epsilon,
        "epsilon_source": source,
        "grid": report.grid,
        "quartiles": { "q1": q1, "median": median, "q3": q3 },
        "iqr": report.iqr(),
        "ranking": report.ranking,
        "clusters": report.clusters,
        "inert_grouping": {
            "rule": r30.rule,
            "holds": r30.holds(),
            "shares_cluster": r30.shares_cluster,
            "near_zero_band": r30.near_zero_band,
        },
        "entries": entries,
    }))
}

/// Outcome of `compare`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Equivalent,
    NotEquivalent,
    Incomparable,
}

/// One side of a comparison.
#[derive(Debug, Clone, Serialize)]
pub struct Side<'a> {
    pub model_id: String,
    pub grid: Vec<GridKey>,
    pub c_values: Vec<f64>,
    pub points: &'a [CoefficientResult],
}

#[allow(clippy::too_many_arguments)]
pub fn compare_json(
    verdict: Verdict,
    relation: &str,
    c: Option<f64>,
    max_difference: Option<f64>,
    reason: Option<&str>,
    a: &Side<'_>,
    b: &Side<'_>,
    manifest: bool,
) -> CliResult<Vec<u8>> {
    pretty(&json!({
        "schema": COMPARE_SCHEMA,
        "manifest": if manifest { Value::from(MANIFEST_FILE) } else { Value::Null },
        "verdict": verdict,
        "equivalent": match verdict {
            Verdict::Equivalent => Value::Bool(true),
            Verdict::NotEquivalent => Value::Bool(false),
            Verdict::Incomparable => Value::Null,
        },
        "relation": relation,
        "c": c,
        "max_difference": max_difference,
        "reason": reason,
        "a": a,
        "b": b,
    }))
}

//! Batch-summary rendering: TSV and JSON, byte-deterministic, numbers at
//! six significant digits.

use std::fmt::Write as _;

use serde_json::{json, Value};

use super::{BatchSummary, RunRow};

/// Output format for [`emit_table`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Tsv,
    Json,
}

/// Six significant digits, scientific.
fn fmt6(x: f64) -> String {
    format!("{:.5e}", x)
}

/// Round to six significant digits for JSON emission.
fn round6(x: f64) -> f64 {
    fmt6(x).parse().unwrap_or(x)
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt6).unwrap_or_else(|| "-".to_string())
}

fn json_opt(x: Option<f64>) -> Value {
    match x {
        Some(v) => json!(round6(v)),
        None => Value::Null,
    }
}

fn flags_cell(row: &RunRow) -> String {
    if row.fit.flags.is_empty() {
        "-".to_string()
    } else {
        row.fit
            .flags
            .iter()
            .map(|f| f.as_str())
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn status_cell(row: &RunRow) -> String {
    match row.exclusion {
        None => "included".to_string(),
        Some(reason) => format!("excluded:{reason}"),
    }
}

const COLUMNS: [&str; 16] = [
    "name",
    "re_theta",
    "A",
    "alpha",
    "B",
    "beta",
    "eta_star",
    "ln_re1",
    "ln_re2",
    "delta",
    "ln_re",
    "lambda",
    "cap_lambda",
    "lg_ratio",
    "flags",
    "status",
];

/// Render a batch summary.
///
/// Column order follows [`COLUMNS`]; absent values render as `-` (TSV) or
/// `null` (JSON); identical summaries produce identical bytes.
pub fn emit_table(summary: &BatchSummary, format: TableFormat) -> String {
    match format {
        TableFormat::Tsv => emit_tsv(summary),
        TableFormat::Json => emit_json(summary),
    }
}

fn emit_tsv(summary: &BatchSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# blscale batch summary");
    let _ = writeln!(
        out,
        "# re_theta_min = {}",
        fmt6(summary.params.re_theta_min)
    );
    let _ = writeln!(out, "# delta_max = {}", fmt6(summary.params.delta_max));
    let _ = writeln!(out, "# runs_included = {}", summary.included_count());
    let _ = writeln!(out, "# runs_excluded = {}", summary.excluded_count());
    let _ = writeln!(out, "# files_failed = {}", summary.failures.len());
    if let Some(agg) = &summary.aggregate {
        let _ = writeln!(out, "# lg_ratio_mean = {}", fmt6(agg.lg_ratio_mean));
        let _ = writeln!(out, "# lg_ratio_std = {}", fmt6(agg.lg_ratio_std));
        let _ = writeln!(out, "# lg_ratio_n = {}", agg.n);
    }
    for failure in &summary.failures {
        let _ = writeln!(out, "# failed: {}: {}", failure.file, failure.error);
    }
    out.push_str(&COLUMNS.join("\t"));
    out.push('\n');
    for row in &summary.rows {
        let s = row.scales.as_ref();
        let cells = [
            row.name.clone(),
            fmt_opt(row.re_theta),
            fmt6(row.fit.wall_law.prefactor()),
            fmt6(row.fit.wall_law.exponent()),
            fmt6(row.fit.outer_law.prefactor()),
            fmt6(row.fit.outer_law.exponent()),
            fmt_opt(row.fit.eta_star),
            fmt_opt(s.map(|s| s.ln_re1)),
            fmt_opt(s.map(|s| s.ln_re2)),
            fmt_opt(s.map(|s| s.delta)),
            fmt_opt(s.map(|s| s.ln_re_eff)),
            fmt_opt(s.map(|s| s.lambda_wall)),
            fmt_opt(s.map(|s| s.lambda_cap)),
            fmt_opt(s.map(|s| s.lg_ratio)),
            flags_cell(row),
            status_cell(row),
        ];
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    out
}

fn emit_json(summary: &BatchSummary) -> String {
    let rows: Vec<Value> = summary
        .rows
        .iter()
        .map(|row| {
            let s = row.scales.as_ref();
            json!({
                "name": row.name,
                "re_theta": json_opt(row.re_theta),
                "A": round6(row.fit.wall_law.prefactor()),
                "alpha": round6(row.fit.wall_law.exponent()),
                "B": round6(row.fit.outer_law.prefactor()),
                "beta": round6(row.fit.outer_law.exponent()),
                "eta_star": json_opt(row.fit.eta_star),
                "ln_re1": json_opt(s.map(|s| s.ln_re1)),
                "ln_re2": json_opt(s.map(|s| s.ln_re2)),
                "delta": json_opt(s.map(|s| s.delta)),
                "ln_re": json_opt(s.map(|s| s.ln_re_eff)),
                "lambda": json_opt(s.map(|s| s.lambda_wall)),
                "cap_lambda": json_opt(s.map(|s| s.lambda_cap)),
                "lg_ratio": json_opt(s.map(|s| s.lg_ratio)),
                "flags": row.fit.flags.iter().map(|f| f.as_str()).collect::<Vec<_>>(),
                "status": if row.included() { "included" } else { "excluded" },
                "exclusion": match row.exclusion {
                    None => Value::Null,
                    Some(r) => json!(r.as_str()),
                },
            })
        })
        .collect();
    let failures: Vec<Value> = summary
        .failures
        .iter()
        .map(|f| json!({"file": f.file, "error": f.error}))
        .collect();
    let doc = json!({
        "re_theta_min": round6(summary.params.re_theta_min),
        "delta_max": round6(summary.params.delta_max),
        "runs_included": summary.included_count(),
        "runs_excluded": summary.excluded_count(),
        "files_failed": summary.failures.len(),
        "aggregate": match &summary.aggregate {
            None => Value::Null,
            Some(a) => json!({
                "lg_ratio_mean": round6(a.lg_ratio_mean),
                "lg_ratio_std": round6(a.lg_ratio_std),
                "n": a.n,
            }),
        },
        "rows": rows,
        "failures": failures,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("json serialization");
    text.push('\n');
    text
}

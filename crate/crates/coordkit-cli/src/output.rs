//! Output helpers: JSON and CSV emission with the resolved run
//! specification embedded for reproducibility.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use coordkit::constraint::{Certificate, ConstraintReport};
use coordkit::prob::Kernel;
use coordkit::{Error, Result};

/// Formats with 12 significant digits, '.' decimal separator.
pub fn sig(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Error::Configuration(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| Error::Configuration(format!("stdout: {e}")))
        }
    }
}

pub fn emit_json(path: Option<&Path>, run_spec: Value, body: Value) -> Result<()> {
    let doc = json!({ "run_spec": run_spec, "result": body });
    let mut text = serde_json::to_string_pretty(&doc)
        .map_err(|e| Error::Numeric(format!("serialization: {e}")))?;
    text.push('\n');
    write_text(path, &text)
}

/// CSV with a leading `# run_spec: {...}` comment line, a header row and
/// 12-significant-digit numeric fields.
pub fn emit_csv(
    path: Option<&Path>,
    run_spec: Value,
    header: &[&str],
    rows: Vec<Vec<String>>,
) -> Result<()> {
    let mut text = format!("# run_spec: {run_spec}\n");
    text.push_str(&header.join(","));
    text.push('\n');
    for row in rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    write_text(path, &text)
}

pub fn kernel_rows_json(k: &Kernel) -> Value {
    let rows: Vec<Vec<f64>> = (0..k.rows()).map(|r| k.row(r).to_vec()).collect();
    json!({
        "given_axes": k.given_axes().iter().map(|a| a.name()).collect::<Vec<_>>(),
        "given_sizes": k.given_sizes(),
        "target_axes": k.target_axes().iter().map(|a| a.name()).collect::<Vec<_>>(),
        "target_sizes": k.target_sizes(),
        "rows": rows,
    })
}

pub fn report_json(report: &ConstraintReport) -> Value {
    let certificate = match &report.certificate {
        Certificate::Strict(aux) => json!({
            "kind": "strict",
            "w_size": aux.w_size(),
            "ceiling_overridden": aux.ceiling_overridden(),
            "kernel": kernel_rows_json(aux.kernel()),
        }),
        Certificate::Causal { front, back } => json!({
            "kind": "causal",
            "front": kernel_rows_json(front),
            "back": kernel_rows_json(back),
        }),
    };
    json!({
        "value": report.value,
        "lower_bound": report.lower_bound,
        "upper_bound": report.upper_bound,
        "closed_form": report.closed_form.map(|cf| json!({
            "label": cf.label(),
            "value": cf.value(),
        })),
        "verdict": report.verdict.to_string(),
        "restarts_used": report.restarts_used,
        "iterations": report.iterations,
        "marginal_residual": report.marginal_residual,
        "certificate": certificate,
    })
}

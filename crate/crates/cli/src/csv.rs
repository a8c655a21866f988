//! Deterministic CSV serialization of an experiment report.
//!
//! Floats are written with 17 significant digits so a value survives a
//! round trip exactly; identical runs therefore produce identical bytes.

use anisohardy::ExperimentReport;
use std::fmt::Write as _;

/// Formats a float with full round-trip precision.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Renders the report as CSV, one row per check, with a fixed header.
pub fn render(report: &ExperimentReport) -> String {
    let mut out = String::new();
    out.push_str("suite,check_id,value,reference,provenance,tolerance,pass,quad_err\n");
    for row in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            row.suite,
            row.check_id,
            fmt_f64(row.value),
            fmt_f64(row.reference),
            row.provenance,
            fmt_f64(row.tolerance),
            row.pass,
            fmt_f64(row.quad_err),
        );
    }
    out
}

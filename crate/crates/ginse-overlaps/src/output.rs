//! CSV (schema v1) and JSON serialization of estimate tables and
//! validation reports.

use crate::estimate::EstimateTable;
use crate::suites::ValidationReport;
use std::io::Write;

pub const CSV_HEADER: &str = "# ginse-overlaps v1";
pub const CSV_COLUMNS: &str = "quantity,re_x1,im_x1,re_x2,im_x2,value_re,value_im,stderr,count";

/// Output format selector shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

/// Writes a table in CSV schema v1; one-point quantities leave the x2
/// columns empty.
pub fn write_csv(tables: &[EstimateTable], w: &mut impl Write) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    writeln!(w, "{CSV_COLUMNS}")?;
    for t in tables {
        for r in &t.rows {
            let (x2re, x2im) = match r.x2 {
                Some(x2) => (format!("{:.17e}", x2.re), format!("{:.17e}", x2.im)),
                None => (String::new(), String::new()),
            };
            writeln!(
                w,
                "{},{:.17e},{:.17e},{},{},{:.17e},{:.17e},{:.17e},{}",
                t.meta.quantity, r.x1.re, r.x1.im, x2re, x2im, r.value.re, r.value.im, r.stderr,
                r.count
            )?;
        }
    }
    Ok(())
}

pub fn tables_to_json(tables: &[EstimateTable]) -> serde_json::Value {
    serde_json::json!({
        "schema": "ginse-overlaps v1",
        "tables": tables.iter().map(|t| serde_json::json!({
            "quantity": t.meta.quantity,
            "n": t.meta.n,
            "alpha": t.meta.alpha,
            "sigma_sq": t.meta.sigma_sq,
            "seed": t.meta.seed,
            "stream_id": t.meta.stream_id,
            "samples": t.meta.samples,
            "threads": t.meta.threads,
            "wall_ms": t.meta.wall_ms as u64,
            "rows": t.rows.iter().map(|r| serde_json::json!({
                "x1": [r.x1.re, r.x1.im],
                "x2": r.x2.map(|x| vec![x.re, x.im]),
                "value": [r.value.re, r.value.im],
                "stderr": r.stderr,
                "count": r.count,
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

pub fn report_to_json(report: &ValidationReport) -> serde_json::Value {
    serde_json::json!({
        "pass": report.pass,
        "suites": report.suites.iter().map(|s| serde_json::json!({
            "name": s.name,
            "pass": s.pass,
            "wall_ms": s.wall_ms as u64,
            "checks": s.checks.iter().map(|c| serde_json::json!({
                "name": c.name,
                "pass": c.pass,
                "measured": c.measured,
                "threshold": c.threshold,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

/// Writes to a file or stdout when `path` is `None` or `-`.
pub fn write_output(path: Option<&str>, contents: &str) -> std::io::Result<()> {
    match path {
        None | Some("-") => {
            print!("{contents}");
            Ok(())
        }
        Some(p) => std::fs::write(p, contents),
    }
}

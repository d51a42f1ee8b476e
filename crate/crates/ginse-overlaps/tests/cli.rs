//! End-to-end checks of the command-line surface: output schema, config
//! handling and exit codes.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ginse-overlaps"))
}

#[test]
fn exact_diag_emits_csv_schema_v1() {
    let out = bin()
        .args(["exact-diag", "--n", "3", "--sigma-sq", "1.0", "--x1", "0.3,0.6"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "# ginse-overlaps v1");
    assert_eq!(
        lines.next().unwrap(),
        "quantity,re_x1,im_x1,re_x2,im_x2,value_re,value_im,stderr,count"
    );
    let row = lines.next().unwrap();
    assert!(row.starts_with("diag_exact,"), "{row}");
    // one-point rows leave the x2 columns empty
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields.len(), 9);
    assert!(fields[3].is_empty() && fields[4].is_empty());
    let value: f64 = fields[5].parse().unwrap();
    assert!(value > 0.0);
}

#[test]
fn origin_subcommand_reports_closed_and_extrapolated() {
    let out = bin()
        .args(["origin", "--n", "2", "--alpha", "0.0", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["tables"][0]["rows"].as_array().unwrap();
    let closed = rows[0]["value"][0].as_f64().unwrap();
    let extrap = rows[1]["value"][0].as_f64().unwrap();
    let want = 5.0 / (3.0 * std::f64::consts::PI);
    assert!((closed - want).abs() < 1e-12);
    assert!((extrap - want).abs() < 1e-3 * want);
}

#[test]
fn validate_origin_filter_passes() {
    let out = bin()
        .args(["validate", "--suites", "origin", "--out", "-"])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], serde_json::Value::Bool(true));
    assert_eq!(v["suites"].as_array().unwrap().len(), 1);
}

#[test]
fn malformed_config_exits_with_code_2() {
    let path = std::env::temp_dir().join("ginse_bad_config.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = bin()
        .args(["exact-diag", "--config", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let path = std::env::temp_dir().join("ginse_config_ok.json");
    std::fs::write(&path, r#"{"n": 2, "alpha": 1.0, "sigma_sq": 0.5}"#).unwrap();
    // config alpha=1 applies; explicit --sigma-sq overrides the file value
    let out = bin()
        .args([
            "density",
            "--config",
            path.to_str().unwrap(),
            "--sigma-sq",
            "2.0",
            "--x1",
            "0.0,0.7",
            "--format",
            "json",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tables"][0]["n"].as_u64(), Some(2));
    assert_eq!(v["tables"][0]["alpha"].as_f64(), Some(1.0));
    assert_eq!(v["tables"][0]["sigma_sq"].as_f64(), Some(2.0));
}

#[test]
fn bulk_scaling_flag_sets_sigma_sq() {
    let out = bin()
        .args(["exact-diag", "--n", "8", "--bulk-scaling", "--x1", "0.3,0.5", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tables"][0]["sigma_sq"].as_f64(), Some(0.125));
}

#[test]
fn sample_check_passes_on_structural_invariants() {
    let out = bin().args(["sample-check", "--n", "3", "--samples", "50"]).output().unwrap();
    assert!(out.status.success());
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = bin().args(["exact-diag", "--does-not-exist"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

//! JSON run configuration mirroring the CLI flags; flags override file
//! values.

use serde::Deserialize;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<usize>,
    pub alpha: Option<f64>,
    pub sigma_sq: Option<f64>,
    pub bulk_scaling: Option<bool>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub out: Option<String>,
    pub format: Option<String>,
    pub suites: Option<Vec<String>>,
}

impl FileConfig {
    pub fn load(path: &str) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {path}: {e}"))?;
        serde_json::from_str(&text).map_err(|e| format!("cannot parse config {path}: {e}"))
    }
}

/// Fully resolved run parameters after merging file and flags.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub n: usize,
    pub alpha: f64,
    pub sigma_sq: f64,
    pub samples: u64,
    pub seed: u64,
    pub threads: usize,
    pub out: Option<String>,
    pub format: crate::output::Format,
    pub suites: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects_unknown_keys() {
        let good: FileConfig =
            serde_json::from_str(r#"{"n": 4, "alpha": 0.0, "suites": ["origin"]}"#).unwrap();
        assert_eq!(good.n, Some(4));
        let bad: Result<FileConfig, _> = serde_json::from_str(r#"{"nn": 4}"#);
        assert!(bad.is_err());
    }
}

//! Report envelope shared by every command.

use hmom_core::{ClassVerdict, Status, Tolerances};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct CommandEcho {
    pub name: String,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictEntry {
    pub name: String,
    pub status: Status,
    pub witness_eig: f64,
    pub scale: f64,
    pub detail: String,
    pub failing_index: Option<usize>,
}

impl VerdictEntry {
    pub fn new(name: impl Into<String>, v: &ClassVerdict) -> Self {
        Self {
            name: name.into(),
            status: v.status,
            witness_eig: v.witness_eig,
            scale: v.scale,
            detail: v.detail.clone(),
            failing_index: v.failing_index,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualEntry {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl ResidualEntry {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            passed: residual.is_finite() && residual <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: CommandEcho,
    /// SHA-256 of the input file, when there is one.
    pub input_digest: Option<String>,
    pub tolerances: Option<Tolerances>,
    pub passed: bool,
    pub verdicts: Vec<VerdictEntry>,
    pub residuals: Vec<ResidualEntry>,
    pub result: Value,
    pub error: Option<String>,
    pub wall_time_s: f64,
}

impl Report {
    pub fn new(name: &str, args: Vec<String>) -> Self {
        Self {
            command: CommandEcho {
                name: name.to_string(),
                args,
            },
            input_digest: None,
            tolerances: None,
            passed: false,
            verdicts: Vec::new(),
            residuals: Vec::new(),
            result: Value::Null,
            error: None,
            wall_time_s: 0.0,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            digest(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn residual_entry_rejects_nan() {
        assert!(!ResidualEntry::new("x", f64::NAN, 1.0).passed);
        assert!(ResidualEntry::new("x", 0.5, 1.0).passed);
    }
}

use std::fs;
use std::path::Path;

use indexmap::IndexMap;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use weylks_core::oracle::{ClaimCheck, Tolerances};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub name: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(name: impl Into<String>, bytes: &[u8]) -> Self {
        let hash = Sha256::digest(bytes);
        InputDigest {
            name: name.into(),
            sha256: hash.iter().map(|b| format!("{b:02x}")).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct WitnessReport {
    /// Multiplier per context.
    pub t: Vec<i64>,
    pub support: Vec<usize>,
    /// Exponent `q` of `e^{iπq}`.
    pub accumulated_phase: String,
}

#[derive(Debug, Serialize)]
pub struct EigenRow {
    pub operator: String,
    pub eigenvalue: [f64; 2],
    pub residual: f64,
    pub is_eigen: bool,
}

#[derive(Debug, Serialize)]
pub struct Timings {
    pub total_ms: f64,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assignment: Option<IndexMap<String, String>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub claims: Vec<ClaimCheck>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub eigen: Vec<EigenRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            command,
            inputs: Vec::new(),
            status: String::new(),
            tolerances: None,
            witness: None,
            assignment: None,
            trace: Vec::new(),
            claims: Vec::new(),
            eigen: Vec::new(),
            details: None,
            certificate: None,
            error: None,
            timings: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        fs::write(path, self.to_json())
    }
}

/// Human table of claim checks.
pub fn claim_table(claims: &[ClaimCheck]) -> String {
    let width = claims
        .iter()
        .map(|c| c.claim.len())
        .max()
        .unwrap_or(5)
        .max(5);
    let mut out = format!(
        "{:<width$}  {:>10}  {:>9}  result\n",
        "claim", "residual", "tolerance"
    );
    for c in claims {
        out.push_str(&format!(
            "{:<width$}  {:>10.3e}  {:>9.1e}  {}\n",
            c.claim,
            c.residual,
            c.tolerance,
            if c.pass { "pass" } else { "FAIL" }
        ));
    }
    out
}

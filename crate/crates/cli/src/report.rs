use qleb::ToleranceConfig;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct ReportDocument {
    pub command: String,
    pub inputs_digest: String,
    pub values: Value,
    pub tolerances: ToleranceConfig,
    pub version: String,
}

impl ReportDocument {
    pub fn new(command: &str, inputs: &Value, values: Value, tol: &ToleranceConfig) -> Self {
        ReportDocument {
            command: command.to_string(),
            inputs_digest: digest(command, inputs),
            values,
            tolerances: *tol,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// SHA-256 of the command name and the canonical JSON of its inputs.
pub fn digest(command: &str, inputs: &Value) -> String {
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    h.update([0u8]);
    h.update(inputs.to_string().as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

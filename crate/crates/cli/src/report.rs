use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Machine-readable record of one command run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs_digest: String,
    pub seed: u64,
    pub outputs: Value,
    pub outputs_digest: String,
    pub wall_time_ms: u64,
}

impl RunReport {
    pub fn new(command: &str, inputs_digest: String, seed: u64, outputs: Value, wall_time_ms: u64) -> Self {
        RunReport {
            command: command.to_string(),
            inputs_digest,
            seed,
            outputs_digest: digest(&[serde_json::to_string(&outputs).expect("json value").as_bytes()]),
            outputs,
            wall_time_ms,
        }
    }
}

pub fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    format!("{:x}", h.finalize())
}

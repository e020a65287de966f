use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Provenance record emitted with every run. Apart from `wall_clock_seconds`
/// it depends only on the command line and the input bytes.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    pub input_hashes: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub tool_version: &'static str,
    pub wall_clock_seconds: f64,
    pub exit_code: i32,
    pub output_sha256: String,
}

impl RunManifest {
    pub fn new(command: &str, args: Vec<String>, seed: Option<u64>) -> Self {
        RunManifest {
            command: command.to_string(),
            args,
            input_hashes: BTreeMap::new(),
            seed,
            tool_version: env!("CARGO_PKG_VERSION"),
            wall_clock_seconds: 0.0,
            exit_code: 0,
            output_sha256: String::new(),
        }
    }

    pub fn finish(&mut self, output: &str, exit_code: i32, seconds: f64) {
        self.output_sha256 = hex::encode(Sha256::digest(output.as_bytes()));
        self.exit_code = exit_code;
        self.wall_clock_seconds = seconds;
    }
}

use std::path::Path;

use chrono::{SecondsFormat, Utc};
use serde::Serialize;

/// Written next to every set of result files; the `args` and `config` are
/// enough to regenerate the results byte for byte.
#[derive(Debug, Serialize)]
pub struct RunManifest<C: Serialize> {
    pub command: String,
    pub args: Vec<String>,
    pub config: C,
    pub seed: Option<u64>,
    pub software_version: String,
    pub started: String,
    pub finished: String,
    pub outputs: Vec<String>,
}

pub fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

impl<C: Serialize> RunManifest<C> {
    pub fn new(command: &str, config: C, seed: Option<u64>, started: String) -> Self {
        Self {
            command: command.to_string(),
            args: std::env::args().collect(),
            config,
            seed,
            software_version: env!("CARGO_PKG_VERSION").to_string(),
            started,
            finished: String::new(),
            outputs: Vec::new(),
        }
    }

    pub fn write(mut self, dir: &Path) -> std::io::Result<()> {
        self.finished = now();
        let text = serde_json::to_string_pretty(&self).expect("manifest serializes");
        std::fs::write(dir.join("manifest.json"), text + "\n")
    }
}

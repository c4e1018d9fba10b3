use std::collections::BTreeMap;
use std::path::Path;

use chrono::{SecondsFormat, Utc};
use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};
use crate::output::write_file;

/// Provenance record written next to, or inside, every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub arguments: Vec<String>,
    pub config: Value,
    pub seed: Option<u64>,
    pub metadata: BTreeMap<String, String>,
    pub started_at: String,
    pub finished_at: Option<String>,
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

impl RunManifest {
    pub fn start(command: &str, seed: Option<u64>) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            arguments: std::env::args().collect(),
            config: Value::Null,
            seed,
            metadata: BTreeMap::new(),
            started_at: now(),
            finished_at: None,
        }
    }

    pub fn with_config(mut self, config: &impl Serialize) -> CliResult<Self> {
        self.config = serde_json::to_value(config)
            .map_err(|e| CliError::usage(format!("cannot serialize configuration: {e}")))?;
        Ok(self)
    }

    pub fn add_metadata<K: Into<String>, V: Into<String>>(
        &mut self,
        entries: impl IntoIterator<Item = (K, V)>,
    ) {
        for (k, v) in entries {
            self.metadata.insert(k.into(), v.into());
        }
    }

    pub fn finish(&mut self) {
        self.finished_at = Some(now());
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        write_file(path, &crate::output::to_json(self)?)
    }
}

//! Output writers with provenance headers. Everything written here is a
//! pure function of (spec, seed), so reruns are byte-identical.

use anyhow::{Context, Result};
use serde::Serialize;
use std::path::Path;

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool_version: &'static str,
    pub command: String,
    pub seed: u64,
    pub config_hash: String,
}

impl Provenance {
    pub fn new(command: &str, seed: u64, config_hash: String) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed,
            config_hash,
        }
    }

    pub fn csv_header(&self) -> String {
        format!(
            "# provenance: tool_version={} command={} seed={} config_hash={}\n",
            self.tool_version, self.command, self.seed, self.config_hash
        )
    }
}

/// JSON document with an embedded provenance block.
pub fn write_json<T: Serialize>(path: &Path, provenance: &Provenance, payload: &T) -> Result<()> {
    #[derive(Serialize)]
    struct Document<'a, T> {
        provenance: &'a Provenance,
        #[serde(flatten)]
        payload: &'a T,
    }
    let text = serde_json::to_string_pretty(&Document {
        provenance,
        payload,
    })?;
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

/// CSV with a leading provenance comment line.
pub fn write_csv(
    path: &Path,
    provenance: &Provenance,
    columns: &[&str],
    rows: &[Vec<String>],
) -> Result<()> {
    let mut text = provenance.csv_header();
    text.push_str(&columns.join(","));
    text.push('\n');
    for row in rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

/// Compact float formatting shared by every CSV writer.
pub fn fmt(value: f64) -> String {
    if value.is_finite() {
        format!("{value}")
    } else {
        "inf".into()
    }
}

pub fn fmt_opt(value: Option<f64>) -> String {
    value.map(fmt).unwrap_or_else(|| "undefined".into())
}

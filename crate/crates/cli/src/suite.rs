//! The `suite` subcommand: run every configuration in a directory and emit
//! a CSV summary ordered by file name.

use std::path::{Path, PathBuf};

use crate::config::load_config;
use crate::instance::execute;

#[derive(Debug)]
pub struct SuiteRow {
    pub config: String,
    pub kind: String,
    pub outcome: String,
    pub rounds: Option<usize>,
    pub hypothesis: Option<String>,
}

impl SuiteRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{}",
            csv_field(&self.config),
            csv_field(&self.kind),
            csv_field(&self.outcome),
            self.rounds.map(|r| r.to_string()).unwrap_or_default(),
            csv_field(self.hypothesis.as_deref().unwrap_or("")),
        )
    }
}

pub const CSV_HEADER: &str = "config,kind,outcome,rounds,hypothesis";

fn csv_field(value: &str) -> String {
    if value.contains(',') || value.contains('"') || value.contains('\n') {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

/// Run every `*.json` file in the directory, in file-name order. Returns the
/// rows and whether any configuration failed with an error.
pub fn run_suite(dir: &Path) -> std::io::Result<(Vec<SuiteRow>, bool)> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();

    let mut rows = Vec::new();
    let mut any_error = false;
    for path in paths {
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        let row = match load_config(&path).map_err(|e| e.to_string()).and_then(|config| {
            execute(&config).map_err(|e| e.to_string()).map(|artifacts| (config, artifacts))
        }) {
            Ok((config, artifacts)) => SuiteRow {
                config: name,
                kind: config.kind.name().to_string(),
                outcome: artifacts.summary.outcome.name().to_string(),
                rounds: Some(artifacts.summary.rounds),
                hypothesis: artifacts.summary.hypothesis,
            },
            Err(message) => {
                any_error = true;
                eprintln!("{name}: {message}");
                SuiteRow {
                    config: name,
                    kind: String::new(),
                    outcome: "error".to_string(),
                    rounds: None,
                    hypothesis: None,
                }
            }
        };
        rows.push(row);
    }
    Ok((rows, any_error))
}

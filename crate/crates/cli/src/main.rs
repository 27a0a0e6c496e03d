use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use alfsynth_cli::config::load_config;
use alfsynth_cli::instance::execute;
use alfsynth_cli::laws::run_laws;
use alfsynth_cli::suite::{run_suite, CSV_HEADER};

#[derive(Parser)]
#[command(
    name = "alfsynth",
    about = "Counterexample-guided inductive synthesis runner",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run one instance configuration.
    Run {
        config: PathBuf,
        /// Write the trace document to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Summary format.
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Audit the learner/teacher contracts while running.
        #[arg(long)]
        checked: bool,
    },
    /// Run every configuration in a directory and print a CSV summary.
    Suite { dir: PathBuf },
    /// Check the sample-space consistency laws for an instance.
    Laws { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage problems exit 1, like any other error; asking for help
            // is not an error.
            let requested = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            return ExitCode::from(if requested { 0 } else { 1 });
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Run { config, trace, format, checked } => {
            let mut loaded = load_config(&config).map_err(|e| e.to_string())?;
            loaded.checked = loaded.checked || checked;
            let artifacts = execute(&loaded).map_err(|e| e.to_string())?;
            if let Some(path) = trace {
                write_atomically(&path, &artifacts.document.to_json_bytes())
                    .map_err(|e| format!("cannot write trace to `{}`: {e}", path.display()))?;
            }
            let summary = &artifacts.summary;
            match format {
                Format::Text => match &summary.hypothesis {
                    Some(h) => println!("{} in {} round(s): {}", summary.outcome.name(), summary.rounds, h),
                    None => println!("{} after {} round(s)", summary.outcome.name(), summary.rounds),
                },
                Format::Json => {
                    let value = serde_json::json!({
                        "config": config.display().to_string(),
                        "kind": summary.kind,
                        "outcome": summary.outcome.name(),
                        "rounds": summary.rounds,
                        "hypothesis": summary.hypothesis,
                    });
                    println!("{value}");
                }
                Format::Csv => {
                    println!("{CSV_HEADER}");
                    let row = alfsynth_cli::suite::SuiteRow {
                        config: config.display().to_string(),
                        kind: summary.kind.to_string(),
                        outcome: summary.outcome.name().to_string(),
                        rounds: Some(summary.rounds),
                        hypothesis: summary.hypothesis.clone(),
                    };
                    println!("{}", row.csv());
                }
            }
            Ok(summary.outcome.exit_code())
        }
        Command::Suite { dir } => {
            let (rows, any_error) = run_suite(&dir).map_err(|e| e.to_string())?;
            println!("{CSV_HEADER}");
            for row in rows {
                println!("{}", row.csv());
            }
            Ok(if any_error { 1 } else { 0 })
        }
        Command::Laws { config } => {
            let loaded = load_config(&config).map_err(|e| e.to_string())?;
            let report = run_laws(&loaded).map_err(|e| e.to_string())?;
            println!(
                "{} violations across {} sample pairs over {} concepts",
                report.violations, report.pairs, report.concepts
            );
            Ok(if report.violations == 0 { 0 } else { 1 })
        }
    }
}

fn write_atomically(path: &std::path::Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut file = std::fs::File::create(&tmp)?;
        file.write_all(bytes)?;
        file.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

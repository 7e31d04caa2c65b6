use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qclock_cli::config::ScenarioConfig;
use qclock_cli::report::write_report;
use qclock_cli::scenarios::{builtin, describe, run_scenario, SCENARIOS};
use qclock_cli::{Error, Result};

#[derive(Parser)]
#[command(name = "qclock", version, about = "Timeless-universe scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario from a config file or by builtin name
    Run {
        /// Path to a TOML scenario config
        #[arg(conflicts_with = "scenario")]
        config: Option<PathBuf>,
        /// Builtin scenario name (see list-scenarios)
        #[arg(long)]
        scenario: Option<String>,
        /// Master seed, overriding the config
        #[arg(long)]
        seed: Option<u64>,
        /// Directory for report.json and timeseries.csv
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the report as JSON instead of text
        #[arg(long)]
        json: bool,
    },
    /// List the builtin scenarios
    ListScenarios {
        /// Print the list as JSON
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Ok(true) on a passing run, Ok(false) when a check failed, Err on
/// configuration or I/O problems.
fn real_main() -> Result<bool> {
    match Cli::parse().command {
        Command::Run {
            config,
            scenario,
            seed,
            out,
            json,
        } => {
            let mut cfg = match (config, scenario) {
                (Some(path), None) => ScenarioConfig::from_path(&path)?,
                (None, Some(name)) => builtin(&name, None)?,
                (None, None) => {
                    return Err(Error::Config(
                        "pass a config file or --scenario <name>".into(),
                    ))
                }
                (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
            };
            if let Some(s) = seed {
                cfg.seed = Some(s);
            }
            let report = run_scenario(&cfg)?;
            let out_dir = out.or_else(|| cfg.output.as_ref().map(|o| o.dir.clone()));
            if let Some(dir) = out_dir {
                write_report(&report, &dir)?;
            }
            if json {
                print!("{}", report.to_json());
            } else {
                print!("{}", report.render_text());
            }
            Ok(report.passed)
        }
        Command::ListScenarios { json } => {
            if json {
                let names: Vec<&str> = SCENARIOS.to_vec();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&names).expect("strings serialize")
                );
            } else {
                for name in SCENARIOS {
                    let blurb = describe(name).expect("every builtin has a description");
                    println!("{name:18} {blurb}");
                }
            }
            Ok(true)
        }
    }
}

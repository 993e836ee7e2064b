use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use relaydmt::jobs::{self, ExperimentConfig, FigureId, JobOutput};
use relaydmt::verify::VerifySettings;

/// Tradeoff curves and outage simulation for amplify-and-forward relay networks.
#[derive(Parser)]
#[command(name = "relaydmt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample analytic tradeoff curves.
    Curve(CommonArgs),
    /// Estimate the outage probability at one SNR.
    Simulate(CommonArgs),
    /// Estimate outage along an SNR grid and fit the diversity slope.
    Sweep(CommonArgs),
    /// Run the randomized bound checks; exits with status 1 if any fails.
    Verify(CommonArgs),
    /// Regenerate the curves of a named figure.
    Figure {
        /// fig3 or fig4; may be omitted when --config is given.
        #[arg(value_parser = parse_figure)]
        figure: Option<FigureId>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config, or a CSV/JSON artifact from an earlier run.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file. Sweeps also write a JSON summary next to it.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Overrides the master seed.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Overrides the trials per SNR point.
    #[arg(long, value_name = "N")]
    trials: Option<u64>,
    /// Worker threads (defaults to all cores); results do not depend on it.
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
}

fn parse_figure(s: &str) -> Result<FigureId, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|_| format!("unknown figure {s:?}"))
}

fn resolve_config(job: &str, common: &CommonArgs, figure: Option<FigureId>) -> Result<ExperimentConfig, String> {
    let config = match (&common.config, figure) {
        (Some(path), _) => jobs::load_config(path).map_err(|e| e.to_string())?,
        (None, Some(figure)) => ExperimentConfig::Figure { figure },
        (None, None) if job == "verify" => ExperimentConfig::Verify {
            settings: VerifySettings::default(),
            seed: 0,
        },
        (None, None) => return Err(format!("{job} needs --config")),
    };
    if config.job_name() != job {
        return Err(format!("config describes a {} job, not {job}", config.job_name()));
    }
    if let (ExperimentConfig::Figure { figure: from_file }, Some(requested)) = (&config, figure) {
        if *from_file != requested {
            return Err("figure argument disagrees with --config".into());
        }
    }
    Ok(config.with_overrides(common.seed, common.trials))
}

fn write_file(path: &Path, contents: &str) -> Result<(), String> {
    std::fs::write(path, contents).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(output: &JobOutput, out: Option<&Path>) -> Result<(), String> {
    match (out, &output.csv, &output.json) {
        (Some(path), Some(csv), json) => {
            let is_json = path.extension().is_some_and(|e| e == "json");
            let csv_path = if is_json { path.with_extension("csv") } else { path.to_path_buf() };
            write_file(&csv_path, csv)?;
            if let Some(json) = json {
                write_file(&csv_path.with_extension("json"), json)?;
            }
        }
        (Some(path), None, Some(json)) => write_file(path, json)?,
        (None, csv, json) => {
            if let Some(csv) = csv {
                print!("{csv}");
                if let Some(json) = json {
                    eprint!("{json}");
                }
            } else if let Some(json) = json {
                print!("{json}");
            }
        }
        (Some(_), None, None) => {}
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, String> {
    let (job, common, figure) = match &cli.command {
        Command::Curve(c) => ("curve", c, None),
        Command::Simulate(c) => ("simulate", c, None),
        Command::Sweep(c) => ("sweep", c, None),
        Command::Verify(c) => ("verify", c, None),
        Command::Figure { figure, common } => ("figure", common, *figure),
    };
    if let Some(threads) = common.threads {
        if threads == 0 {
            return Err("--threads must be at least 1".into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    let config = resolve_config(job, common, figure)?;
    let output = jobs::run(&config).map_err(|e| e.to_string())?;
    emit(&output, common.out.as_deref())?;
    Ok(output.success)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

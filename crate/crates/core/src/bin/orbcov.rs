use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use orbcov::fom::Metric;
use orbcov::scenario::{self, ScenarioConfig};
use orbcov::{ErrorKind, Result};

#[derive(Parser)]
#[command(name = "orbcov", version, about = "Constellation coverage analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Scenario configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory, overriding the config's `output_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses one per core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Metric for the contour export (run) or the sweep objective (sweep).
    #[arg(long)]
    metric: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the expanded constellation elements as JSON.
    Expand(Common),
    /// Run the full scenario and write reports.
    Run(Common),
    /// Evaluate the config's sweep section and write sweep.csv.
    Sweep(Common),
    /// Check the config and print a summary.
    Validate(Common),
}

fn load(c: &Common) -> Result<(ScenarioConfig, Option<Metric>)> {
    let mut config = ScenarioConfig::load(&c.config)?;
    if let Some(out) = &c.out {
        config.output_dir = out.clone();
    }
    let metric = c.metric.as_deref().map(str::parse::<Metric>).transpose()?;
    Ok((config, metric))
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Expand(c) => {
            let (config, _) = load(&c)?;
            print!("{}", scenario::expand_json(&config)?);
        }
        Command::Run(c) => {
            let (mut config, metric) = load(&c)?;
            if let Some(m) = metric {
                config.contour_metric = m;
            }
            let out = scenario::run_scenario(&config, c.workers)?;
            println!("{}", out.dir.display());
        }
        Command::Sweep(c) => {
            let (mut config, metric) = load(&c)?;
            if let (Some(m), Some(s)) = (metric, config.sweep.as_mut()) {
                s.objective = m;
            }
            let path = scenario::run_sweep_to_dir(&config, c.workers, &config.output_dir)?;
            println!("{}", path.display());
        }
        Command::Validate(c) => {
            let (config, _) = load(&c)?;
            let summary = scenario::validation_summary(&config)?;
            for w in &summary.warnings {
                log::warn!("{w}");
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&summary).expect("summary serializes")
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .target(env_logger::Target::Stderr)
        .init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::error!("{e}");
            match e.kind() {
                ErrorKind::Config => ExitCode::from(2),
                ErrorKind::Runtime => ExitCode::from(3),
            }
        }
    }
}

//! `stin-sim`: Monte Carlo coverage and channel-estimation experiments for
//! satellite-terrestrial multi-connectivity.

use clap::{Args, Parser, Subcommand};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;
use stin_cli::config_text::{self, ConfigError};
use stin_cli::output::{self, RunManifest};
use stin_core::engine::{
    discrepancy_curve, preset, run_beamforming, run_connectivity, ExperimentConfig, Scenario,
    Scheme,
};

/// Environment variable naming the default output directory.
const OUT_DIR_ENV: &str = "STIN_SIM_OUT";

#[derive(Parser)]
#[command(name = "stin-sim", version, about = "STIN multi-connectivity Monte Carlo simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write per-curve CSVs plus a JSON manifest.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment preset: fig3_beamforming | fig4_pilots | fig6_mc_vs_sc
    /// (short aliases fig3/fig4/fig6).
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// Config file in the flat `key = value` format.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one config key, e.g. --set ntn.altitude_km=600. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Master seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Trial-count override.
    #[arg(long)]
    trials: Option<usize>,
    /// Output directory (default: $STIN_SIM_OUT, then ./results).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for the trial loop (default: all cores).
    #[arg(long)]
    parallel: Option<usize>,
}

enum CliError {
    Config(String),
    Runtime(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Runtime(m) | CliError::Io(m) => m,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn load_config(args: &RunArgs) -> Result<ExperimentConfig, CliError> {
    let base = match (&args.preset, &args.config) {
        (Some(name), None) => preset(name).map_err(|e| CliError::Config(e.to_string()))?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            config_text::parse_onto(&preset("custom").unwrap(), &text)?
        }
        _ => {
            return Err(CliError::Config(
                "exactly one of --preset or --config is required".into(),
            ));
        }
    };

    let mut map = config_text::config_to_map(&base);
    for entry in &args.set {
        let (key, value) = entry.split_once('=').ok_or_else(|| {
            CliError::Config(format!("--set expects KEY=VALUE, got `{entry}`"))
        })?;
        config_text::overlay(&mut map, key.trim(), value.trim())?;
    }
    if let Some(seed) = args.seed {
        map.insert("seed".into(), seed.to_string());
    }
    if let Some(trials) = args.trials {
        map.insert("trials".into(), trials.to_string());
    }
    Ok(config_text::build_config(&map)?)
}

fn output_dir(args: &RunArgs) -> PathBuf {
    args.out
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("results"))
}

/// File tag for a Nakagami-m value: `2` for 2.0, `2p5` for 2.5.
fn m_tag(m: f64) -> String {
    m.to_string().replace('.', "p")
}

fn run(args: RunArgs) -> Result<(), CliError> {
    let config = load_config(&args)?;
    if let Some(threads) = args.parallel {
        rayon_pool(threads).map_err(CliError::Runtime)?;
    }

    let dir = output_dir(&args);
    std::fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;

    let start = Instant::now();
    let mut outputs: BTreeMap<String, String> = BTreeMap::new();
    match config.scenario {
        Scenario::Fig6McVsSc | Scenario::Custom => {
            let run = run_connectivity(&config).map_err(|e| CliError::Runtime(e.to_string()))?;
            for scheme in Scheme::ALL {
                let name = format!("{}.csv", scheme.label());
                let csv = output::coverage_csv(&run.coverage_curve(scheme));
                output::write_file(&dir.join(&name), &csv)?;
                outputs.insert(scheme.label().to_string(), name);
            }
        }
        Scenario::Fig3Beamforming => {
            let run = run_beamforming(&config).map_err(|e| CliError::Runtime(e.to_string()))?;
            for (k, &m) in run.m_grid.iter().enumerate() {
                for (beamforming, prefix) in [(true, "beamforming"), (false, "non_beamforming")] {
                    let label = format!("{prefix}_m{}", m_tag(m));
                    let name = format!("{label}.csv");
                    let csv = output::coverage_csv(&run.coverage_curve(k, beamforming));
                    output::write_file(&dir.join(&name), &csv)?;
                    outputs.insert(label, name);
                }
            }
        }
        Scenario::Fig4Pilots => {
            let curve = discrepancy_curve(&config).map_err(|e| CliError::Runtime(e.to_string()))?;
            let csv = output::discrepancy_csv(&curve);
            output::write_file(&dir.join("discrepancy.csv"), &csv)?;
            outputs.insert("discrepancy".into(), "discrepancy.csv".into());
        }
    }
    let runtime_seconds = start.elapsed().as_secs_f64();

    let manifest = RunManifest {
        scenario: config.scenario.as_str().to_string(),
        master_seed: config.master_seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        runtime_seconds,
        outputs: outputs.clone(),
        config_text: config_text::to_text(&config),
    };
    output::write_manifest(&dir.join("manifest.json"), &manifest)?;

    for name in outputs.values() {
        println!("wrote {}", display_path(&dir, name));
    }
    println!("wrote {}", display_path(&dir, "manifest.json"));
    let work = match config.scenario {
        Scenario::Fig4Pilots => {
            format!("{} seeds x {} samples", config.pilot_seeds, config.pilot_samples)
        }
        _ => format!("{} trials", config.n_trials),
    };
    println!(
        "{}: {work}, seed {}, {:.2}s",
        config.scenario.as_str(),
        config.master_seed,
        runtime_seconds
    );
    Ok(())
}

fn display_path(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

fn rayon_pool(threads: usize) -> Result<(), String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| format!("failed to size the worker pool: {e}"))
}

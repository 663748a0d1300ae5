//! Batch CLI around the `sim` harness.
//!
//! Example:
//!   snec-sim run --scenario secret_bit_error --C 3 --ZI 1 --ZO 1 --q 8 \
//!     --n 9 --trials 10000 --seed 42 --adversary cut_attack --out run.csv
//!
//! Options may also come from a flat key=value config file (`--config`);
//! explicit flags override file values. When `--out` is omitted the file
//! lands in $SNEC_OUT_DIR (or the current directory) under a generated name.
//! Exit codes: 0 success, 2 configuration error, 3 I/O error.

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use snec::channel::CodeParams;
use snec::sim::{self, AdversaryName, ExperimentConfig, OutputFormat, Scenario, SimError};

const OUT_DIR_ENV: &str = "SNEC_OUT_DIR";

#[derive(Parser)]
#[command(name = "snec-sim", version, about = "Monte Carlo campaigns for secure network codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write per-trial records plus a summary line.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Flat key=value config file; flags below override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// secret_bit_error | full_scheme_error | ec_layer_error | secrecy_audit
    /// | lemma1 | legacy_attack | rate_sweep
    #[arg(long)]
    scenario: Option<String>,
    /// Network capacity (min-cut).
    #[arg(long = "C")]
    c: Option<usize>,
    /// Eavesdropped links.
    #[arg(long = "ZI")]
    z_i: Option<usize>,
    /// Jammed links.
    #[arg(long = "ZO")]
    z_o: Option<usize>,
    /// Base field size; must be a power of two ≤ 2^32.
    #[arg(long)]
    q: Option<u64>,
    /// Packet length (columns).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// none | random_jam | cut_attack | mimic
    #[arg(long)]
    adversary: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | jsonl
    #[arg(long)]
    format: Option<String>,
    /// Fix the transmitted bit (0 or 1) for bit scenarios.
    #[arg(long)]
    bit: Option<u8>,
}

fn parse_config_file(path: &PathBuf) -> Result<HashMap<String, String>, SimError> {
    let text = std::fs::read_to_string(path)?;
    let mut map = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            SimError::Config(format!("{}:{}: expected key=value", path.display(), lineno + 1))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn parsed<T: FromStr>(map: &HashMap<String, String>, key: &str) -> Result<Option<T>, SimError>
where
    T::Err: std::fmt::Display,
{
    match map.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse()
            .map(Some)
            .map_err(|e| SimError::Config(format!("config key '{key}': {e}"))),
    }
}

fn build_config(args: &RunArgs) -> Result<ExperimentConfig, SimError> {
    let file = match &args.config {
        Some(path) => parse_config_file(path)?,
        None => HashMap::new(),
    };
    let missing = |flag: &str| SimError::Config(format!("missing required option --{flag}"));

    let scenario_name = args
        .scenario
        .clone()
        .or_else(|| file.get("scenario").cloned())
        .ok_or_else(|| missing("scenario"))?;
    let scenario = Scenario::from_str(&scenario_name).map_err(SimError::Config)?;

    let c = args.c.or(parsed(&file, "C")?).ok_or_else(|| missing("C"))?;
    let z_i = args.z_i.or(parsed(&file, "ZI")?).ok_or_else(|| missing("ZI"))?;
    let z_o = args.z_o.or(parsed(&file, "ZO")?).ok_or_else(|| missing("ZO"))?;
    let q: u64 = args.q.or(parsed(&file, "q")?).ok_or_else(|| missing("q"))?;
    let n = args.n.or(parsed(&file, "n")?).ok_or_else(|| missing("n"))?;
    if !q.is_power_of_two() {
        return Err(SimError::Config(format!("q = {q} is not a power of two")));
    }
    let m = q.trailing_zeros();
    let params = CodeParams::new(c, z_i, z_o, m, n).map_err(|e| SimError::Config(e.to_string()))?;

    let adversary_name = args
        .adversary
        .clone()
        .or_else(|| file.get("adversary").cloned())
        .unwrap_or_else(|| "none".into());
    let adversary = AdversaryName::from_str(&adversary_name).map_err(SimError::Config)?;

    let format_name = args
        .format
        .clone()
        .or_else(|| file.get("format").cloned())
        .unwrap_or_else(|| "csv".into());
    let format = OutputFormat::from_str(&format_name).map_err(SimError::Config)?;

    let bit = match args.bit.or(parsed(&file, "bit")?) {
        None => None,
        Some(0) => Some(false),
        Some(1) => Some(true),
        Some(other) => return Err(SimError::Config(format!("bit must be 0 or 1, got {other}"))),
    };

    Ok(ExperimentConfig {
        scenario,
        params,
        trials: args.trials.or(parsed(&file, "trials")?).unwrap_or(1000),
        seed: args.seed.or(parsed(&file, "seed")?).unwrap_or(0),
        adversary,
        output_path: args.out.clone().or_else(|| file.get("out").map(PathBuf::from)),
        format,
        bit,
    })
}

fn run(args: &RunArgs) -> Result<(), SimError> {
    let config = build_config(args)?;
    let default_dir = std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."));
    let (summary, path) = sim::run_to_file(&config, &default_dir)?;
    println!("{summary}");
    println!("wrote {}", path.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run(args) = cli.command;
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ SimError::Config(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e @ SimError::Io(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

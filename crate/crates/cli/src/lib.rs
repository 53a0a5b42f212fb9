//! Command-line front end: resolves a per-command JSON configuration,
//! runs the computation and writes CSV or JSON tables.

pub mod commands;
pub mod config;
pub mod table;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use config::Tunable;
use table::{emit, Format, Metadata};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "TWOWAY_OUT_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] twoway_secrecy::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(_) => 2,
            CliError::Io { .. } => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "twoway-secrecy",
    version,
    about = "Secrecy-rate regions and near-field randomized scheduling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full-duplex modulo-2 channel region.
    RegionFdModulo(Common),
    /// Full-duplex Gaussian channel region.
    RegionFdGaussian(Common),
    /// Half-duplex modulo-2 regions, randomized and deterministic scheduling.
    RegionHdModulo(Common),
    /// Half-duplex Gaussian region with randomized scheduling.
    RegionHdGaussian(Common),
    /// Full-duplex Gaussian region against the comparison schemes.
    CompareGaussian(Common),
    /// Near-field TDM protocol with randomized jamming.
    SimTdm(Common),
    /// Near-field two-way randomized scheduling protocol.
    SimTwoway(Common),
    /// Two-way rate when Eve is far away.
    Asymptote(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// JSON configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (default: `<command>.<format>` in $TWOWAY_OUT_DIR or the
    /// current directory).
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Base seed of the simulation commands.
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo trials per transmission scenario (simulation commands).
    #[arg(long)]
    trials: Option<u64>,
    /// Grid step of the command's main sweep.
    #[arg(long)]
    step: Option<f64>,
    /// Double every grid resolution.
    #[arg(long)]
    fine: bool,
    /// Override a configuration key, e.g. `--set geometry.r_e=100`.
    #[arg(long = "set", value_name = "KEY=VALUE", value_parser = parse_assignment)]
    sets: Vec<(String, String)>,
}

fn parse_assignment(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("expected KEY=VALUE, got `{s}`"))
}

impl Command {
    fn parts(&self) -> (&'static str, &Common) {
        match self {
            Command::RegionFdModulo(c) => ("region-fd-modulo", c),
            Command::RegionFdGaussian(c) => ("region-fd-gaussian", c),
            Command::RegionHdModulo(c) => ("region-hd-modulo", c),
            Command::RegionHdGaussian(c) => ("region-hd-gaussian", c),
            Command::CompareGaussian(c) => ("compare-gaussian", c),
            Command::SimTdm(c) => ("sim-tdm", c),
            Command::SimTwoway(c) => ("sim-twoway", c),
            Command::Asymptote(c) => ("asymptote", c),
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<Value, CliError> {
    let Some(path) = path else {
        return Ok(Value::Object(Default::default()));
    };
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn output_path(name: &str, common: &Common) -> PathBuf {
    match &common.output {
        Some(p) => p.clone(),
        None => {
            let dir = std::env::var_os(OUT_DIR_ENV)
                .map(PathBuf::from)
                .unwrap_or_default();
            dir.join(format!("{name}.{}", common.format.extension()))
        }
    }
}

/// `<output>.stats.<ext>` next to the main output.
pub fn stats_path(output: &Path, format: Format) -> PathBuf {
    let mut s = output.as_os_str().to_os_string();
    s.push(format!(".stats.{}", format.extension()));
    PathBuf::from(s)
}

fn execute<C, F>(name: &str, common: &Common, seeded: bool, compute: F) -> Result<(), CliError>
where
    C: DeserializeOwned + Serialize + Tunable,
    F: FnOnce(&C, Metadata) -> Result<commands::Output, CliError>,
{
    let mut sets = common.sets.clone();
    if let Some(seed) = common.seed {
        sets.push(("seed".into(), seed.to_string()));
    }
    if let Some(trials) = common.trials {
        sets.push(("trials".into(), trials.to_string()));
    }
    let mut cfg: C = config::resolve(load_config(common.config.as_deref())?, &sets)?;
    if let Some(step) = common.step {
        cfg.set_step(step)?;
    }
    if common.fine {
        cfg.refine();
    }
    let json = serde_json::to_value(&cfg).expect("config is serializable");
    let meta = Metadata {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        command: name.to_string(),
        seed: if seeded {
            json.get("seed").and_then(Value::as_u64)
        } else {
            None
        },
        config_digest: config::digest(name, &cfg),
        notes: Default::default(),
    };
    let out = compute(&cfg, meta)?;
    let path = output_path(name, common);
    emit(&out.table, common.format, &path)?;
    if let Some(stats) = &out.stats {
        emit(stats, common.format, &stats_path(&path, common.format))?;
    }
    Ok(())
}

fn dispatch(cmd: &Command) -> Result<(), CliError> {
    let (name, common) = cmd.parts();
    match cmd {
        Command::RegionFdModulo(_) => execute(name, common, false, commands::region_fd_modulo),
        Command::RegionFdGaussian(_) => execute(name, common, false, commands::region_fd_gaussian),
        Command::RegionHdModulo(_) => execute(name, common, false, commands::region_hd_modulo),
        Command::RegionHdGaussian(_) => execute(name, common, false, commands::region_hd_gaussian),
        Command::CompareGaussian(_) => execute(name, common, false, commands::compare_gaussian),
        Command::SimTdm(_) => execute(name, common, true, commands::sim_tdm),
        Command::SimTwoway(_) => execute(name, common, true, commands::sim_twoway),
        Command::Asymptote(_) => execute(name, common, false, commands::asymptote),
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

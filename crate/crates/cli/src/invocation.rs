use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use ana_core::config::{DEFAULT_AGENTS, DEFAULT_DIMENSION, DEFAULT_ITERATIONS};
use ana_core::harness::OutputFormat;
use ana_core::{BackendKind, BaseFunction, Bounds, ConditionScope, Config};
use clap::error::ErrorKind;
use clap::{Args, Parser};

use crate::config_file::read_config;
use crate::CliError;

pub const DEFAULT_FUNCTION: &str = "sphere";
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_RUNS: usize = 30;
pub const DEFAULT_WARMUPS: usize = 3;
pub const DEFAULT_REPS: usize = 5;

#[derive(Parser, Debug)]
#[command(
    name = "ana",
    version,
    about = "Ant nesting optimizer with scalar and vectorized backends"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Subcommand, Debug)]
enum Command {
    /// Run one optimization and emit its best-fitness trace
    Run(Flags),
    /// Time both backends after checking that they agree
    Compare(Flags),
    /// Mean and standard deviation of the final best over repeated runs
    Bench(Flags),
    /// Check the two backends step by step; exit 2 on divergence
    Equiv(Flags),
    /// Emit every agent position after every iteration (CSV)
    Trajectory(Flags),
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// Function name, or a comma-separated list for bench
    #[arg(long)]
    function: Option<String>,
    #[arg(long)]
    dim: Option<String>,
    #[arg(long)]
    agents: Option<String>,
    #[arg(long)]
    iters: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Search box as LO:HI
    #[arg(long, allow_hyphen_values = true, value_name = "LO:HI")]
    bounds: Option<String>,
    /// scalar or vector
    #[arg(long = "impl", value_name = "BACKEND")]
    backend: Option<String>,
    /// element or agent
    #[arg(long)]
    scope: Option<String>,
    #[arg(long)]
    runs: Option<String>,
    #[arg(long)]
    warmups: Option<String>,
    #[arg(long)]
    reps: Option<String>,
    #[arg(long, value_name = "PATH")]
    out: Option<String>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

impl Flags {
    fn entries(self) -> Vec<(&'static str, Option<String>)> {
        vec![
            ("function", self.function),
            ("dim", self.dim),
            ("agents", self.agents),
            ("iters", self.iters),
            ("seed", self.seed),
            ("bounds", self.bounds),
            ("impl", self.backend),
            ("scope", self.scope),
            ("runs", self.runs),
            ("warmups", self.warmups),
            ("reps", self.reps),
            ("out", self.out),
            ("format", self.format),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Run,
    Compare,
    Bench,
    Equiv,
    Trajectory,
}

/// Fully resolved settings: flags, then config file, then defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub functions: Vec<String>,
    pub dimension: usize,
    pub agents: usize,
    pub iterations: usize,
    pub seed: u64,
    pub bounds: Bounds<f64>,
    pub backend: BackendKind,
    pub scope: ConditionScope,
    pub runs: usize,
    pub warmups: usize,
    pub reps: usize,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Settings {
    pub fn run_config(&self, function: &str) -> Config {
        Config::new(function)
            .with_dimension(self.dimension)
            .with_agents(self.agents)
            .with_iterations(self.iterations)
            .with_seed(self.seed)
            .with_bounds(self.bounds)
            .with_scope(self.scope)
    }

    /// The single function of every subcommand except bench.
    pub fn function(&self) -> &str {
        &self.functions[0]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliInvocation {
    pub subcommand: Subcommand,
    pub settings: Settings,
    pub config_file: Option<PathBuf>,
}

/// Why parsing stopped without an invocation.
#[derive(Debug)]
pub enum ParseOutcome {
    /// `--help` or `--version`; print and exit 0.
    Display(String),
    Failed(CliError),
}

impl From<CliError> for ParseOutcome {
    fn from(err: CliError) -> Self {
        ParseOutcome::Failed(err)
    }
}

fn value<T: std::str::FromStr>(key: &str, raw: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    raw.parse()
        .map_err(|e| CliError::usage(format!("--{key}: invalid value `{raw}`: {e}")))
}

fn positive(key: &str, raw: &str) -> Result<usize, CliError> {
    let n: usize = value(key, raw)?;
    if n == 0 {
        return Err(CliError::usage(format!("--{key} must be at least 1")));
    }
    Ok(n)
}

pub fn parse_bounds(raw: &str) -> Result<Bounds<f64>, CliError> {
    let Some((lo, hi)) = raw.split_once(':') else {
        return Err(CliError::usage(format!(
            "--bounds: expected LO:HI, got `{raw}`"
        )));
    };
    let lo: f64 = value("bounds", lo.trim())?;
    let hi: f64 = value("bounds", hi.trim())?;
    Bounds::new(lo, hi).map_err(|e| CliError::usage(format!("--bounds: {e}")))
}

fn resolve(subcommand: Subcommand, raw: &BTreeMap<&str, String>) -> Result<Settings, CliError> {
    let get = |key: &str| raw.get(key).map(String::as_str);

    let functions: Vec<String> = match get("function") {
        Some(list) => list.split(',').map(|f| f.trim().to_string()).collect(),
        None if subcommand == Subcommand::Bench => BaseFunction::ALL
            .iter()
            .map(|f| f.name().to_string())
            .collect(),
        None => vec![DEFAULT_FUNCTION.to_string()],
    };
    if functions.iter().any(String::is_empty) {
        return Err(CliError::usage("--function: empty function name"));
    }
    if functions.len() > 1 && subcommand != Subcommand::Bench {
        return Err(CliError::usage(
            "--function: only bench accepts a list of functions",
        ));
    }

    let settings = Settings {
        functions,
        dimension: get("dim").map_or(Ok(DEFAULT_DIMENSION), |v| positive("dim", v))?,
        agents: get("agents").map_or(Ok(DEFAULT_AGENTS), |v| positive("agents", v))?,
        iterations: get("iters").map_or(Ok(DEFAULT_ITERATIONS), |v| value("iters", v))?,
        seed: get("seed").map_or(Ok(DEFAULT_SEED), |v| value("seed", v))?,
        bounds: get("bounds").map_or(Ok(Bounds::default()), parse_bounds)?,
        backend: get("impl").map_or(Ok(BackendKind::Vector), |v| value("impl", v))?,
        scope: get("scope").map_or(Ok(ConditionScope::Element), |v| value("scope", v))?,
        runs: get("runs").map_or(Ok(DEFAULT_RUNS), |v| positive("runs", v))?,
        warmups: get("warmups").map_or(Ok(DEFAULT_WARMUPS), |v| value("warmups", v))?,
        reps: get("reps").map_or(Ok(DEFAULT_REPS), |v| positive("reps", v))?,
        out: get("out").map(PathBuf::from),
        format: get("format").map_or(Ok(OutputFormat::Csv), |v| value("format", v))?,
    };
    if subcommand == Subcommand::Trajectory && settings.format != OutputFormat::Csv {
        return Err(CliError::usage(
            "--format: trajectory is written as csv only",
        ));
    }
    Ok(settings)
}

pub fn parse<I, S>(args: I) -> Result<CliInvocation, ParseOutcome>
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return Err(ParseOutcome::Display(e.render().to_string()));
        }
        Err(e) if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            return Err(CliError::usage(e.render().to_string()).into());
        }
        Err(e) => return Err(CliError::usage(first_line(&e)).into()),
    };
    let (subcommand, mut flags) = match cli.command {
        Command::Run(f) => (Subcommand::Run, f),
        Command::Compare(f) => (Subcommand::Compare, f),
        Command::Bench(f) => (Subcommand::Bench, f),
        Command::Equiv(f) => (Subcommand::Equiv, f),
        Command::Trajectory(f) => (Subcommand::Trajectory, f),
    };
    let config_file = flags.config.take();

    let mut raw: BTreeMap<&str, String> = BTreeMap::new();
    if let Some(path) = &config_file {
        for (key, v) in read_config(path)? {
            let key = crate::config_file::KEYS
                .iter()
                .find(|k| **k == key)
                .expect("validated key");
            raw.insert(key, v);
        }
    }
    for (key, v) in flags.entries() {
        if let Some(v) = v {
            raw.insert(key, v);
        }
    }
    let settings = resolve(subcommand, &raw)?;
    Ok(CliInvocation {
        subcommand,
        settings,
        config_file,
    })
}

fn first_line(e: &clap::Error) -> String {
    let rendered = e.render().to_string();
    let line = rendered.lines().next().unwrap_or_default();
    line.trim_start_matches("error: ").to_string()
}

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use crate::grid::GridSpec;
use crate::table::Format;

#[derive(Debug, Parser)]
#[command(name = "cvrx", version, about = "Binary coherent-state receiver simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Error probability of selected receivers over an n̄ grid.
    #[command(args_override_self = true)]
    Sweep(SweepArgs),
    /// Decomposed receiver under loss and detector noise, optionally with squeezing mitigation.
    #[command(args_override_self = true)]
    Noisy(NoisyArgs),
    /// Gate counts per scheme, or the error-budget comparison over an n̄ grid.
    #[command(args_override_self = true)]
    Resources(ResourcesArgs),
    /// Gate listing of the decomposed receiver.
    #[command(args_override_self = true)]
    Decompose(DecomposeArgs),
    /// Photon information efficiency of selected receivers, with the symbol-by-symbol bound.
    #[command(args_override_self = true)]
    Pie(PieArgs),
    /// Dimension-doubling check of one receiver at one n̄.
    #[command(args_override_self = true)]
    Converge(ConvergeArgs),
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Fock dimension [default: $CVRX_DEFAULT_DIM or 40]
    #[arg(long)]
    pub dim: Option<usize>,
    /// Worker threads for grid points.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Output file [default: stdout]
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// JSON object of flag values; command-line flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Seed for optimizer restarts.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Clone)]
pub struct GridArgs {
    /// start:stop:count, endpoints included.
    #[arg(long, default_value = "0.001:0.5:20")]
    pub nbar: GridSpec,
    /// Logarithmic spacing.
    #[arg(long)]
    pub log: bool,
}

#[derive(Debug, Args, Clone)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Comma-separated receiver names.
    #[arg(long, default_value = "helstrom,homodyne,kennedy,sh_exact,decomposed")]
    pub receivers: String,
    /// Sasaki–Hirota order for sh_exact.
    #[arg(long, default_value_t = 1)]
    pub order: usize,
    /// Splitting iterations for decomposed.
    #[arg(long, default_value_t = 10)]
    pub iterations: usize,
    /// Add marker comment lines; only `mars` is known.
    #[arg(long)]
    pub annotate: Option<String>,
    /// Downlink mean photon number for the mars markers.
    #[arg(long)]
    pub mars_downlink: Option<f64>,
    /// Uplink mean photon number for the mars markers.
    #[arg(long)]
    pub mars_uplink: Option<f64>,
}

#[derive(Debug, Args, Clone)]
pub struct NoisyArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 10)]
    pub iterations: usize,
    /// Beamsplitter reflectivity after each cubic gate.
    #[arg(long, default_value_t = 0.01)]
    pub eta_bs: f64,
    /// Detector quantum efficiency.
    #[arg(long, default_value_t = 0.8)]
    pub eta_q: f64,
    /// Dark-count probability.
    #[arg(long, default_value_t = 0.001)]
    pub nu: f64,
    /// Also optimize squeezing before each cubic gate.
    #[arg(long)]
    pub mitigate: bool,
    /// per-position, global or per-slot.
    #[arg(long, default_value = "per-position")]
    pub layout: String,
    /// Undo each squeeze right after its gate and loss.
    #[arg(long)]
    pub sandwich: bool,
    /// Evaluation budget per optimizer run.
    #[arg(long, default_value_t = 2000)]
    pub max_evals: usize,
    /// Seeded optimizer restarts.
    #[arg(long, default_value_t = 2)]
    pub restarts: usize,
}

#[derive(Debug, Args, Clone)]
pub struct ResourcesArgs {
    #[command(flatten)]
    pub common: Common,
    /// splitting, commutator or both.
    #[arg(long, default_value = "both")]
    pub scheme: String,
    /// Comma-separated elementary strengths.
    #[arg(long, default_value = "0.1,0.01,0.001")]
    pub t: String,
    /// Error-budget gate comparison over the n̄ grid instead of the tables.
    #[arg(long)]
    pub compare: bool,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Error budget for --compare.
    #[arg(long, default_value_t = 0.1)]
    pub budget: f64,
}

#[derive(Debug, Args, Clone)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Amplitude; the total time is the optimal receiver time.
    #[arg(long, conflicts_with = "t")]
    pub alpha: Option<f64>,
    /// Total interaction time, instead of --alpha.
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long, default_value_t = 10)]
    pub iterations: usize,
    /// splitting or commutator.
    #[arg(long, default_value = "splitting")]
    pub scheme: String,
}

#[derive(Debug, Args, Clone)]
pub struct PieArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value = "decomposed,sh_exact,homodyne,kennedy")]
    pub receivers: String,
    #[arg(long, default_value_t = 1)]
    pub order: usize,
    #[arg(long, default_value_t = 10)]
    pub iterations: usize,
}

#[derive(Debug, Args, Clone)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Receiver to check.
    #[arg(long, default_value = "sh_exact")]
    pub receiver: String,
    /// Mean photon number.
    #[arg(long, default_value_t = 0.1)]
    pub at: f64,
    #[arg(long, default_value_t = 1)]
    pub order: usize,
    #[arg(long, default_value_t = 10)]
    pub iterations: usize,
    /// Largest accepted change between d and 2d.
    #[arg(long, default_value_t = cvrx_core::fock::DOUBLING_TOL)]
    pub tol: f64,
}

/// Splices the config file's entries in as flags right after the subcommand,
/// so later command-line flags override them.
pub fn expand_config(argv: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let path = config_path(&argv);
    let Some(path) = path else { return Ok(argv) };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("config {path}: {e}"))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| format!("config {path}: {e}"))?;
    let Value::Object(map) = doc else {
        return Err(format!("config {path}: expected a JSON object"));
    };
    let mut extra = Vec::new();
    for (key, value) in map {
        let flag = format!("--{}", key.replace('_', "-"));
        if flag == "--config" {
            continue;
        }
        match value {
            Value::Bool(true) => extra.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Number(n) => extra.extend([flag, n.to_string()]),
            Value::String(s) => extra.extend([flag, s]),
            Value::Array(items) => {
                let parts: Result<Vec<String>, String> = items
                    .into_iter()
                    .map(|v| match v {
                        Value::String(s) => Ok(s),
                        Value::Number(n) => Ok(n.to_string()),
                        other => Err(format!("config {path}: unsupported list item {other} in `{key}`")),
                    })
                    .collect();
                extra.extend([flag, parts?.join(",")]);
            }
            Value::Object(_) => return Err(format!("config {path}: nested object in `{key}`")),
        }
    }
    // argv[0] is the program, argv[1] the subcommand
    let split = argv.len().min(2);
    let mut out: Vec<OsString> = argv[..split].to_vec();
    out.extend(extra.into_iter().map(OsString::from));
    out.extend(argv[split..].iter().cloned());
    Ok(out)
}

fn config_path(argv: &[OsString]) -> Option<String> {
    let mut it = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned());
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(name = "polya", version, about = "Recurrence of lattice and complex-weighted walks")]
pub struct Cli {
    /// JSON file of flag values; flags given on the command line win.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<String>,

    /// Acknowledge running past a default cap or budget.
    #[arg(long, global = true)]
    pub i_know: bool,

    /// Memory budget for lattice tables, in bytes.
    #[arg(long, global = true, env = "POLYA_MEMORY_BUDGET")]
    pub memory_budget: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Exact walk counts a, b, c, d and the primed counts for a target.
    Count(CountArgs),
    /// Partial return probabilities sum_{j<=n} c_j / d_j.
    Profile(ProfileArgs),
    /// Enclosure of the return probability for d >= 3.
    Limit(LimitArgs),
    /// Enclosure of the probability of ever visiting a target.
    Vlimit(VlimitArgs),
    /// Visit probabilities against the Green-function asymptotic.
    Asym(AsymArgs),
    /// Planar gap bounds, Robbins brackets and u_{2n} checks.
    Bounds2d(Bounds2dArgs),
    /// Series, identities and limits for a weighted graph.
    Weighted(WeightedArgs),
    /// Monte Carlo visit frequencies checked against exact values.
    Simulate(SimulateArgs),
    /// Run the invariant battery.
    Verify(VerifyArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct CountArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub steps: usize,
    /// Comma-separated target, the origin when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub target: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct ProfileArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub steps: usize,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct LimitArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long, default_value_t = 2000)]
    pub steps: usize,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct VlimitArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub target: String,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct AsymArgs {
    #[arg(long)]
    pub dim: usize,
    /// Targets separated by ';', coordinates by ','.
    #[arg(long, allow_hyphen_values = true)]
    pub targets: String,
    #[arg(long, default_value_t = 400)]
    pub steps: usize,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct Bounds2dArgs {
    /// Comma-separated walk lengths N.
    #[arg(long, value_delimiter = ',')]
    pub n_list: Vec<usize>,
    #[arg(long, default_value = "exact")]
    pub mode: String,
    /// Print Robbins brackets of N! instead of gap records.
    #[arg(long)]
    pub robbins: bool,
    /// Also check the u_{2n} bounds for n up to this value.
    #[arg(long)]
    pub u2n: Option<usize>,
    #[arg(long)]
    pub exact_cap: Option<usize>,
    #[arg(long)]
    pub float_cap: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct WeightedArgs {
    /// Graph JSON file, or '-' for standard input.
    #[arg(long)]
    pub graph: String,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    /// Target vertex; overrides the graph file.
    #[arg(long)]
    pub target: Option<usize>,
    /// Comma-separated permutation; overrides the graph file.
    #[arg(long, value_delimiter = ',')]
    pub perm: Option<Vec<usize>>,
    /// general or convex; chosen from the weight when omitted.
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub steps: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub target: Option<String>,
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Report the law of the endpoint instead of the visit frequency.
    #[arg(long)]
    pub endpoints: bool,
    /// Run the calibration battery.
    #[arg(long)]
    pub calibrate: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Small sizes only.
    #[arg(long)]
    pub quick: bool,
}

impl Command {
    pub fn seed(&self) -> Option<u64> {
        match self {
            Command::Simulate(a) => Some(a.seed),
            Command::Verify(_) => Some(polya_core::verify::CALIBRATION_SEED),
            _ => None,
        }
    }
}

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tempcorr::correlations::{RelabelingGroup, DEFAULT_VERTEX_CAP};
use tempcorr::DEFAULT_SEED;

/// Temporal correlations of sequential measurements: polytope vertices,
/// quantum simulation, dimension witnesses and their qubit bounds.
///
/// Exit codes: 0 success, 1 other failure, 2 cap exceeded, 3 schema
/// violation, 4 behavior not in the polytope, 5 outside supported scope.
#[derive(Parser, Debug)]
#[command(name = "tempcorr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate (and optionally classify) the deterministic vertices.
    Vertices(VerticesArgs),
    /// Compute the behavior of a system model or named protocol.
    Simulate(SimulateArgs),
    /// Evaluate one witness on a behavior.
    Witness(WitnessArgs),
    /// Evaluate all built-in witnesses and report qubit verdicts.
    Certify(CertifyArgs),
    /// Print qubit bounds or tabulate the closed-form profiles.
    Bounds(BoundsArgs),
    /// Maximize a witness over qubit strategies.
    Optimize(OptimizeArgs),
    /// Write a behavior as a convex combination of vertices.
    Decompose(DecomposeArgs),
    /// Build a system model realizing a vertex or a decomposition.
    Realize(RealizeArgs),
    /// Write a random valid system model.
    RandomSystem(RandomSystemArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Group {
    Identity,
    GlobalOutcomes,
    PerSettingOutcomes,
}

impl From<Group> for RelabelingGroup {
    fn from(g: Group) -> Self {
        match g {
            Group::Identity => RelabelingGroup::Identity,
            Group::GlobalOutcomes => RelabelingGroup::GlobalOutcomes,
            Group::PerSettingOutcomes => RelabelingGroup::PerSettingOutcomes,
        }
    }
}

#[derive(Args, Debug, Clone, Copy)]
pub struct ScenarioArgs {
    /// Sequence length.
    #[arg(long = "L", default_value_t = 2)]
    pub length: usize,
    /// Outcomes per measurement.
    #[arg(long = "R", default_value_t = 2)]
    pub outcomes: usize,
    /// Settings per time step.
    #[arg(long = "S", default_value_t = 2)]
    pub settings: usize,
}

#[derive(Args, Debug)]
pub struct VerticesArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Partition the vertices into relabeling classes.
    #[arg(long)]
    pub classify: bool,
    #[arg(long, value_enum, default_value_t = Group::PerSettingOutcomes)]
    pub group: Group,
    /// Refuse to enumerate more vertices than this.
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    pub cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// System model JSON file.
    #[arg(long, conflicts_with_all = ["protocol", "strategy"], required_unless_present_any = ["protocol", "strategy"])]
    pub system: Option<PathBuf>,
    /// Named protocol: qubit-B1-3, qubit-B2-3, qutrit-e1, qutrit-e3.
    #[arg(long, conflicts_with = "strategy")]
    pub protocol: Option<String>,
    /// Qubit strategy JSON, as written by `optimize`.
    #[arg(long)]
    pub strategy: Option<PathBuf>,
    #[arg(long = "L", default_value_t = 2)]
    pub length: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    /// Behavior JSON file.
    #[arg(long)]
    pub behavior: PathBuf,
    /// B1, B2, B3, B4 or a witness JSON file.
    #[arg(long, default_value = "B1")]
    pub functional: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[arg(long)]
    pub behavior: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    #[value(name = "C1")]
    C1,
    #[value(name = "C3")]
    C3,
    #[value(name = "B1profile")]
    B1Profile,
    #[value(name = "B3profile")]
    B3Profile,
    #[value(name = "B4envelope")]
    B4Envelope,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long, value_enum)]
    pub which: Which,
    /// Grid points per parameter for profiles (at least 2).
    #[arg(long, default_value_t = 1001)]
    pub grid: usize,
    /// Output format for constants; profiles are always CSV.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OptimizeArgs {
    /// B1, B2, B3, B4 or a witness JSON file.
    #[arg(long, default_value = "B1")]
    pub functional: String,
    #[arg(long, default_value_t = 200)]
    pub restarts: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Maximum parameter sweeps per restart.
    #[arg(long, default_value_t = 2000)]
    pub iterations: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub behavior: PathBuf,
    /// Refuse to emit more components than this.
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    pub cap: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RealizeArgs {
    /// e1..e4 or an enumeration index in the scenario given by --L/--R/--S.
    #[arg(
        long,
        conflicts_with = "decomposition",
        required_unless_present = "decomposition"
    )]
    pub vertex: Option<String>,
    /// Decomposition JSON file, as written by `decompose`.
    #[arg(long)]
    pub decomposition: Option<PathBuf>,
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RandomSystemArgs {
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 2)]
    pub settings: usize,
    #[arg(long, default_value_t = 2)]
    pub outcomes: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Vertices(a) => commands::vertices(&a),
        Command::Simulate(a) => commands::simulate(&a),
        Command::Witness(a) => commands::witness(&a),
        Command::Certify(a) => commands::certify(&a),
        Command::Bounds(a) => commands::bounds(&a),
        Command::Optimize(a) => commands::optimize(&a),
        Command::Decompose(a) => commands::decompose(&a),
        Command::Realize(a) => commands::realize(&a),
        Command::RandomSystem(a) => commands::random_system(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Lovász-number bounds for sets of quantum observables.
#[derive(Parser, Debug)]
#[command(name = "thetaur", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Anticommutativity graph of an observable set.
    Graph(GraphArgs),
    /// Sandwich report and expectation, variance and entropic bounds.
    Bounds(BoundsArgs),
    /// Linear entanglement witness from two observable sets.
    Witness(WitnessArgs),
    /// Compare θ and ω against see-saw and PPT-relaxation values.
    Verify(VerifyArgs),
    /// Gap table for random Pauli subsets.
    Scan(ScanArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum EntropyArg {
    Shannon,
    Tsallis,
}

#[derive(Args, Debug)]
struct Common {
    /// Observable-set JSON file.
    #[arg(long)]
    input: PathBuf,
    /// Output file (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Relative duality-gap target of the θ solve.
    #[arg(long)]
    gap_tol: Option<f64>,
}

#[derive(Args, Debug)]
struct GraphArgs {
    #[command(flatten)]
    common: Common,
    /// Also emit the commutation graph G.
    #[arg(long)]
    commutation: bool,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value_t = EntropyArg::Shannon)]
    entropy: EntropyArg,
    /// Tsallis parameter.
    #[arg(long, default_value_t = 1.5)]
    q: f64,
    /// Density-matrix JSON evaluated against every bound.
    #[arg(long)]
    state: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WitnessArgs {
    #[command(flatten)]
    common: Common,
    /// Observable-set JSON for the second party.
    #[arg(long)]
    input_b: PathBuf,
    /// Density-matrix JSON on the joint space.
    #[arg(long)]
    state: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SeesawArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    /// Threads for see-saw restarts.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    seesaw_args: SeesawArgs,
    /// Run the see-saw lower bound.
    #[arg(long)]
    seesaw: bool,
    /// Run the PPT-relaxation upper bound.
    #[arg(long)]
    ppt: bool,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long)]
    qubits: usize,
    #[arg(long)]
    max_set_size: usize,
    #[arg(long)]
    samples: usize,
    #[command(flatten)]
    seesaw_args: SeesawArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    gap_tol: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Graph(a) => commands::graph(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Witness(a) => commands::witness(a),
        Command::Verify(a) => commands::verify(a),
        Command::Scan(a) => commands::scan(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = commands::exit_code(&e);
            if code == commands::EXIT_CAP {
                eprintln!(
                    "hint: the input exceeds a size cap; reduce the set or the number of qubits"
                );
            }
            ExitCode::from(code)
        }
    }
}

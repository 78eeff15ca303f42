mod commands;
mod io;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};
use wgspec_core::format::parse_complex;
use wgspec_core::{Complex64, Side};

#[derive(Parser)]
#[command(name = "wgspec", version, about = "Spectra of weighted graphs, coverings and orbital graphs")]
struct Cli {
    /// Emit the report as JSON instead of KEY: value lines.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for parallel sweeps; results do not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a graph operation and check it against the matrix route.
    GraphOp(GraphOpArgs),
    /// Eigenvalues of a graph or matrix file, with optional membership checks.
    Spectrum(SpectrumArgs),
    /// Dump the operator of a graph as a matrix file.
    Matrix(MatrixArgs),
    /// Verify, lift and compare coverings.
    #[command(subcommand)]
    Cover(CoverCommand),
    /// Compare orbital graphs of two points.
    Orbital(OrbitalArgs),
    /// Structural checks on the one-sided shift.
    DemoShift(DemoShiftArgs),
}

#[derive(Clone, Copy, ValueEnum)]
pub enum GraphOp {
    Scale,
    Add,
    Adjoint,
    Compose,
    Deficiency,
}

fn complex_arg(s: &str) -> Result<Complex64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

fn side_arg(s: &str) -> Result<Side, String> {
    s.parse()
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

#[derive(Args)]
pub struct GraphOpArgs {
    pub op: GraphOp,
    /// One graph file; two for `compose`.
    #[arg(required = true, num_args = 1..=2)]
    pub inputs: Vec<PathBuf>,
    /// Scalar for `scale`, `add` and `deficiency`.
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    pub lambda: Option<Complex64>,
    /// Deficiency radius; defaults to twice the norm bound.
    #[arg(long = "R", value_parser = positive)]
    pub radius: Option<f64>,
    #[arg(long, value_parser = side_arg, default_value = "right")]
    pub side: Side,
    /// Output graph path; defaults to `<input>_<op>.wg` next to the input.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SpectrumArgs {
    /// Graph (`wgraph v1`) or matrix (`matrix v1`) file.
    pub input: PathBuf,
    /// Decide membership of this point; repeatable.
    #[arg(long = "check-lambda", value_parser = complex_arg, allow_hyphen_values = true)]
    pub check_lambda: Vec<Complex64>,
    /// Deficiency radius; defaults to twice the norm bound.
    #[arg(long = "R", value_parser = positive)]
    pub radius: Option<f64>,
    #[arg(long, value_parser = positive, default_value_t = wgspec_core::spectra::MEMBERSHIP_TOL)]
    pub tol: f64,
    /// Write `x y` eigenvalue pairs for plotting.
    #[arg(long)]
    pub scatter: Option<PathBuf>,
}

#[derive(Args)]
pub struct MatrixArgs {
    pub input: PathBuf,
    /// Output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum CoverCommand {
    /// Check the covering conditions of a covering file.
    Verify { covering: PathBuf },
    /// Lift a base graph along a voltage file.
    Lift {
        base: PathBuf,
        voltages: PathBuf,
        /// Output stem; writes `<stem>.wg` and `<stem>.cov`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check spectral inclusion for a covering file or for seeded random lifts.
    Include(IncludeArgs),
}

#[derive(Args)]
pub struct IncludeArgs {
    #[arg(required_unless_present = "random", conflicts_with = "random")]
    pub covering: Option<PathBuf>,
    /// Number of seeded random voltage covers to test instead of a file.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_parser = positive, default_value_t = wgspec_core::spectra::SUBSET_TOL)]
    pub tol: f64,
}

#[derive(Args)]
pub struct OrbitalArgs {
    /// Action file for the first point.
    pub action: PathBuf,
    /// Group-algebra element file.
    pub element: PathBuf,
    /// First root.
    pub x: String,
    /// Second root.
    pub y: String,
    /// Action file for the second point; defaults to the first.
    #[arg(long)]
    pub action_y: Option<PathBuf>,
    /// Level for automaton actions (overrides the file).
    #[arg(long)]
    pub level: Option<usize>,
    /// Level for the second automaton action; defaults to `--level`.
    #[arg(long)]
    pub level_y: Option<usize>,
    /// Largest ball radius in the local isomorphism table.
    #[arg(long, default_value_t = 4)]
    pub radius: usize,
    #[arg(long, value_parser = positive, default_value_t = wgspec_core::spectra::MEMBERSHIP_TOL)]
    pub tol: f64,
    /// Point α of the positive element used in the transfer check;
    /// defaults to the first eigenvalue of the first operator.
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
    pub lambda: Option<Complex64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
}

#[derive(Args)]
pub struct DemoShiftArgs {
    #[arg(long, default_value_t = 100)]
    pub depth: u64,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn run(cli: Cli) -> Result<(report::Report, bool)> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global()?;
    }
    match cli.command {
        Command::GraphOp(a) => commands::graph_op(&a),
        Command::Spectrum(a) => commands::spectrum(&a),
        Command::Matrix(a) => commands::matrix(&a),
        Command::Cover(c) => commands::cover(&c),
        Command::Orbital(a) => commands::orbital(&a),
        Command::DemoShift(a) => commands::demo_shift(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok((report, ok)) => {
            print!("{}", report.render(json));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

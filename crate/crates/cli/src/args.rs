use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Pinned Laplacian solves, vertex elimination and random-walk identities.
///
/// All vertex indices are 1-based. Results are written as JSON.
#[derive(Debug, Parser)]
#[command(name = "laplace-walk", version)]
pub struct Cli {
    /// Write output to this file instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,

    /// Pretty-print JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a matrix for the Laplacian properties and rank n-1.
    Validate {
        #[arg(long)]
        matrix: PathBuf,
        /// Row-sum tolerance relative to the largest diagonal entry.
        #[arg(long, default_value_t = laplace_walk::tol::ROW_SUM)]
        tol: f64,
    },
    /// Weighted Laplacian of an edge list.
    Laplacian {
        #[arg(long)]
        graph: PathBuf,
        /// Emit CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Pinned solve of A x = f_pin with x_pin = 0.
    Solve {
        #[command(flatten)]
        system: SystemSource,
        #[arg(long)]
        pin: usize,
    },
    /// Eliminate one vertex (Schur complement) from A x = f.
    Eliminate {
        #[command(flatten)]
        system: SystemSource,
        #[arg(long)]
        vertex: usize,
        /// Shift the load at this vertex first so that it sums to zero.
        #[arg(long)]
        pin: Option<usize>,
    },
    /// Replace a triangle (3x3 matrix) by a star through a fourth vertex.
    StarExpand {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        csv: bool,
    },
    /// Spring equilibrium with one mass nailed to the origin.
    Equilibrium {
        #[arg(long)]
        graph: PathBuf,
        /// CSV with one row per mass and one column per axis, or JSON rows.
        #[arg(long)]
        forces: PathBuf,
        #[arg(long)]
        nail: usize,
    },
    /// Hitting times from every vertex to a target.
    Hit {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        target: usize,
        #[command(flatten)]
        law: LawArg,
    },
    /// Full hitting-time table, row j column i = H(j,i).
    HitMatrix {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        law: LawArg,
    },
    /// Expected return times 2m/deg(i).
    ReturnTimes {
        #[arg(long)]
        graph: PathBuf,
        /// Emit {i, deg, R} records instead of a bare array.
        #[arg(long)]
        detailed: bool,
        #[command(flatten)]
        law: LawArg,
    },
    /// Check the three-cycle reversal identity.
    VerifyCtw {
        #[command(flatten)]
        source: IdentitySource,
        #[arg(long, num_args = 3, value_names = ["I", "J", "K"], required_unless_present = "all_triples", conflicts_with = "all_triples")]
        triple: Option<Vec<usize>>,
        #[arg(long)]
        all_triples: bool,
        /// Report the residual after each elimination down to the star (single triple only).
        #[arg(long, conflicts_with = "all_triples")]
        trace: bool,
        #[arg(long, default_value_t = laplace_walk::tol::IDENTITY)]
        tol: f64,
    },
    /// Check the k-cycle reversal identity for a vertex sequence.
    VerifyCycle {
        #[command(flatten)]
        source: IdentitySource,
        #[arg(long, num_args = 3.., required = true)]
        seq: Vec<usize>,
        #[arg(long, default_value_t = laplace_walk::tol::IDENTITY)]
        tol: f64,
    },
    /// Residual of sum_{k~i} H(k,i) = 2m - deg(i).
    NeighborSum {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        vertex: usize,
        #[arg(long, default_value_t = laplace_walk::tol::IDENTITY)]
        tol: f64,
    },
    /// Monte Carlo estimate of a hitting time.
    SimulateHit {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[command(flatten)]
        walk: WalkArgs,
    },
    /// Monte Carlo estimate of a return time.
    SimulateReturn {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        vertex: usize,
        #[command(flatten)]
        walk: WalkArgs,
    },
}

/// A linear system given as a matrix or as the Laplacian of a graph.
#[derive(Debug, Args)]
pub struct SystemSource {
    #[arg(long, required_unless_present = "graph", conflicts_with = "graph")]
    pub matrix: Option<PathBuf>,
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Load vector: CSV numbers or a JSON array.
    #[arg(long)]
    pub load: PathBuf,
}

/// Either a graph alone (hitting times of the simple walk), or a matrix or
/// graph together with a load.
#[derive(Debug, Args)]
pub struct IdentitySource {
    #[arg(long, required_unless_present = "graph", conflicts_with = "graph", requires = "load")]
    pub matrix: Option<PathBuf>,
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub load: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LawArg {
    /// Step with probability proportional to edge weight instead of uniformly.
    #[arg(long)]
    pub weighted: bool,
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = laplace_walk::sim::DEFAULT_MAX_STEPS)]
    pub max_steps: u64,
    #[command(flatten)]
    pub law: LawArg,
}

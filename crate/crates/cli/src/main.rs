mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "isoradial", version, about = "Discrete harmonic and holomorphic analysis on isoradial graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Family {
    Square,
    Twoseq,
    Random,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OpKind {
    Laplacian,
    Dbar,
    Cauchy,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PoissonMode {
    Interior,
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Hm,
    Green,
    Poisson,
    Beurling,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a quad-graph and write it as JSON.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        delta: f64,
        /// Steps per generator family on each side of the origin.
        #[arg(long)]
        extent: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Smallest admissible rhombus angle.
        #[arg(long, default_value_t = isoradial::harness::DEFAULT_ETA)]
        eta: f64,
        /// Generator angles of the first family (twoseq), comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        alpha: Vec<f64>,
        /// Generator angles of the second family (twoseq), comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        beta: Vec<f64>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Cut a discrete domain out of a graph.
    Domain {
        #[arg(long)]
        graph: PathBuf,
        /// disc:cx,cy,R | rect:S,T | halfdisc:R | slitdisc:cx,cy,R,angle | poly:file.json
        #[arg(long, allow_hyphen_values = true)]
        region: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Apply a discrete operator to a function.
    Op {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        domain: Option<PathBuf>,
        #[arg(long, value_enum)]
        op: OpKind,
        #[arg(long = "fn")]
        function: PathBuf,
        /// Rhombus at which the Cauchy formula is evaluated.
        #[arg(long)]
        z0: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Free Green's function around a Γ-vertex, with the logarithmic reference.
    Green {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        u0: usize,
        /// Radius of the sampled disc; defaults to 10δ.
        #[arg(long)]
        radius: Option<f64>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Cauchy kernel around a rhombus, with the continuous reference.
    Cauchy {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        z0: usize,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Solve the Dirichlet problem with boundary data given on Γ.
    Solve {
        #[arg(long)]
        domain: PathBuf,
        /// Function file whose values at the exterior vertices are the data.
        #[arg(long)]
        bc: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Harmonic measure of a boundary arc seen from an interior vertex.
    Hm {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        from: usize,
        /// Angular range A,B of the arc about the center.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        arc: Vec<f64>,
        /// Center of the angles; defaults to the center of the region.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        center: Option<Vec<f64>>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Interior or boundary Poisson kernel.
    Poisson {
        #[arg(long, value_enum)]
        mode: PoissonMode,
        #[arg(long)]
        domain: PathBuf,
        /// Boundary pair index of the kernel's pole.
        #[arg(long)]
        pair: usize,
        /// Interior vertex of the normalization (interior mode).
        #[arg(long)]
        from: Option<usize>,
        /// Lower boundary pair of the normalization (boundary mode); defaults
        /// to the pair nearest the origin.
        #[arg(long)]
        o: Option<usize>,
        #[arg(long, default_value_t = isoradial::harness::LAYOUT_S)]
        s: f64,
        #[arg(long, default_value_t = isoradial::harness::LAYOUT_T)]
        t: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Monte Carlo harmonic measure of an arc.
    Walk {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        arc: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        center: Option<Vec<f64>>,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run the convergence experiments and write a report.
    Converge {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.05,0.025")]
        deltas: Vec<f64>,
        #[arg(long, default_value = "square,random:1,random:2")]
        lattices: String,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

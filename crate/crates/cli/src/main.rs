//! `qmonge`: distances between spin-j quantum states from the command line.

mod commands;
mod exact;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qmonge::qstate::{parse_half_integer, SpinQuantum};
use qmonge::sphere::SphereGrid;

use report::Format;

#[derive(Parser, Debug)]
#[command(name = "qmonge", version, about = "Monge and standard distances between spin-j quantum states")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Spin quantum number, e.g. `1`, `3/2` or `1.5`.
    #[arg(long, global = true)]
    pub j: Option<String>,
    /// Transport grid as `<n_theta>x<n_phi>` Gauss-Legendre by equispaced nodes.
    #[arg(long, global = true, default_value = "32x64")]
    pub grid: String,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// `text`, `csv` or `json`.
    #[arg(long, global = true, default_value = "text")]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for parallel stages.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Distance between two states.
    Dist {
        #[arg(long, value_enum, default_value_t = Metric::Monge)]
        metric: Metric,
        first: String,
        second: String,
    },
    /// Standard distances against the Monge distance for the canonical state pairs.
    Table2 {
        /// Angles for the coherent-state rows.
        #[arg(long, value_delimiter = ',', default_value = "1.5707963267948966")]
        xi: Vec<f64>,
        /// Weights for the `a ρ₊ + (1 − a) ρ₋` rows.
        #[arg(long, value_delimiter = ',', default_value = "0.5")]
        a: Vec<f64>,
    },
    /// Husimi density on the grid, or the transport plan to a second state.
    HusimiExport {
        state: String,
        #[arg(long)]
        transport_to: Option<String>,
    },
    /// Stellar roots of a pure state.
    Stellar { state: String },
    /// Distance between two nearby coherent states under a kicked map.
    Lyapunov {
        /// Rotation angle of `exp(−i p J_y)`.
        #[arg(long, default_value_t = 1.7)]
        p: f64,
        /// Torsion strength of `exp(−i k J_z² / 2j)`.
        #[arg(long, default_value_t = 6.0)]
        k: f64,
        /// Initial angular separation.
        #[arg(long, default_value_t = 0.01)]
        xi0: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        /// Polar angle of the first coherent state.
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        theta0: f64,
        #[arg(long, default_value_t = 0.0)]
        phi0: f64,
        #[arg(long, value_enum, default_value_t = Metric::Smonge)]
        metric: Metric,
    },
    /// Mean Monge distance of an operator's eigenvectors from the maximally mixed state.
    Localization {
        /// `jx`, `jy`, `jz`, `identity`, `kicked` or `json:<path>`.
        #[arg(long, default_value = "jz")]
        operator: String,
        #[arg(long, default_value_t = 1.7)]
        p: f64,
        #[arg(long, default_value_t = 6.0)]
        k: f64,
        #[arg(long, value_enum, default_value_t = Metric::Monge)]
        metric: Metric,
    },
    /// Stratum table and partition census for dimension `n`.
    Topology {
        #[arg(long)]
        n: usize,
        /// Also classify this state's spectrum (needs `--j`).
        #[arg(long)]
        classify: Option<String>,
        #[arg(long, default_value_t = qmonge::topology::DEFAULT_EPS)]
        eps: f64,
    },
    /// Random-state experiments.
    Stats {
        #[arg(value_enum)]
        experiment: Experiment,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Reference state for `reference`.
        #[arg(long, default_value = "plus")]
        reference: String,
        /// Dimensions for `scaling`.
        #[arg(long, value_delimiter = ',', default_value = "11,21,41,81")]
        dims: Vec<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Trace,
    Hs,
    Bures,
    Fs,
    Monge,
    MongeNumeric,
    Smonge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    /// Mean simplified distance from random states to `--reference`.
    Reference,
    /// Mean simplified distance between random pairs against dimension.
    Scaling,
    /// Mean Wehrl entropy of random states.
    Wehrl,
}

/// Exit status 2 for bad input, 3 when a solver gives up.
#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Solver(String),
}

impl From<qmonge::Error> for Failure {
    fn from(e: qmonge::Error) -> Self {
        use qmonge::Error::*;
        match e {
            EigenFailure | Quadrature(_) | Infeasible(_) | IterationCap(_) => Failure::Solver(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;

impl Global {
    pub fn spin(&self) -> Outcome<SpinQuantum> {
        let text = self.j.as_deref().ok_or_else(|| Failure::Invalid("--j is required for this command".into()))?;
        let two_j = parse_half_integer(text)?;
        if two_j < 1 {
            return Err(Failure::Invalid(format!("j must be positive, got {text}")));
        }
        Ok(SpinQuantum::new(two_j as u32)?)
    }

    pub fn transport_grid(&self) -> Outcome<Arc<SphereGrid>> {
        let bad = || Failure::Invalid(format!("--grid expects <n_theta>x<n_phi>, got '{}'", self.grid));
        let (a, b) = self.grid.split_once('x').ok_or_else(bad)?;
        let n_theta: usize = a.trim().parse().map_err(|_| bad())?;
        let n_phi: usize = b.trim().parse().map_err(|_| bad())?;
        Ok(Arc::new(SphereGrid::gauss_product(n_theta, n_phi)?))
    }
}

fn run(cli: Cli) -> Outcome<String> {
    let g = &cli.global;
    if let Some(n) = g.threads {
        if n == 0 {
            return Err(Failure::Invalid("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Invalid(e.to_string()))?;
    }
    match cli.command {
        Command::Dist { metric, first, second } => commands::dist(g, metric, &first, &second),
        Command::Table2 { xi, a } => commands::table2(g, &xi, &a),
        Command::HusimiExport { state, transport_to } => commands::husimi_export(g, &state, transport_to.as_deref()),
        Command::Stellar { state } => commands::stellar(g, &state),
        Command::Lyapunov { p, k, xi0, steps, theta0, phi0, metric } => {
            commands::lyapunov(g, commands::KickedMap { p, k }, xi0, steps, (theta0, phi0), metric)
        }
        Command::Localization { operator, p, k, metric } => {
            commands::localization(g, &operator, commands::KickedMap { p, k }, metric)
        }
        Command::Topology { n, classify, eps } => commands::topology(g, n, classify.as_deref(), eps),
        Command::Stats { experiment, samples, reference, dims } => {
            commands::stats(g, experiment, samples, &reference, &dims)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.global.out.clone();
    match run(cli) {
        Ok(text) => {
            let written = match &out {
                Some(path) => std::fs::write(path, text),
                None => std::io::stdout().lock().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("solver failure: {msg}");
            ExitCode::from(3)
        }
    }
}

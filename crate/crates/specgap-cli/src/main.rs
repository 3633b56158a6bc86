//! `specgap` — certified spectral-gap analysis of finite Markov chains.
//!
//! Subcommands load chains, fit and verify drift/minorization certificates,
//! compute every applicable bound route, and compare each certified bound
//! against the exact eigenvalue oracle. All reports are JSON on stdout;
//! every error maps to exit code 1 with `{"error": {"kind", "detail"}}`.

mod commands;
mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "specgap", version, about = "Certified spectral-gap bounds for Markov chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a chain: stationary measure, reversibility, exact spectrum,
    /// and certified bounds when a Lyapunov function is supplied.
    Analyze {
        /// Chain JSON file: {"labels": [...], "P": [[...]], "pi": [...]?}
        chain: PathBuf,
        /// Lyapunov function: inline JSON array or a file containing one
        #[arg(long)]
        lyapunov: Option<String>,
        /// Small set as comma-separated state indices, e.g. "0,3,7"
        #[arg(long)]
        set: Option<String>,
        /// Small set as the sublevel set {V <= R}
        #[arg(long)]
        level_set: Option<f64>,
        /// Allow non-reversible chains and use the adjoint-product route
        #[arg(long)]
        nonreversible: bool,
        /// Detailed-balance tolerance
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Discretize the autoregressive Gaussian chain, certify its gap, and
    /// compare the bound against the exact discretized spectrum.
    Ou {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        sigma: f64,
        /// Number of grid nodes (odd)
        #[arg(long, default_value_t = 401)]
        grid: usize,
        /// Domain half-width; defaults to 6 sigma / a
        #[arg(long)]
        l: Option<f64>,
        /// Write the full spectrum as CSV to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Discretize the diffusion map for a registry potential and certify
    /// its gap.
    Diffmap {
        /// One of: quadratic, shifted_quadratic, lipschitz_plus_quadratic, flat
        #[arg(long)]
        potential: String,
        /// Lipschitz coefficient for lipschitz_plus_quadratic
        #[arg(long, default_value_t = 1.0)]
        pot_c: f64,
        /// Quadratic coefficient for lipschitz_plus_quadratic
        #[arg(long, default_value_t = 0.5)]
        pot_delta: f64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        lambda0: f64,
        /// Dissipativity radius
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 321)]
        grid: usize,
        #[arg(long)]
        l: f64,
    },
    /// Iterate a start measure and emit TV/moment decay CSVs with the
    /// certified envelope.
    Simulate {
        chain: PathBuf,
        /// Start measure: "pi", "delta:IDX", or an inline JSON array
        #[arg(long, default_value = "delta:0")]
        mu0: String,
        /// Rate source: "exact", "poincare-psd", "squared-chain", "doeblin"
        #[arg(long, default_value = "exact")]
        beta_source: String,
        /// Lyapunov function (required for certified rate sources)
        #[arg(long)]
        lyapunov: Option<String>,
        #[arg(long)]
        set: Option<String>,
        #[arg(long)]
        level_set: Option<f64>,
        /// Observable for the moment series; defaults to the indicator of
        /// state 0
        #[arg(long)]
        observable: Option<String>,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        /// Output prefix: writes `<out>.tv.csv` and `<out>.moment.csv`
        #[arg(long)]
        out: PathBuf,
    },
    /// The two-state counter-example: one fixed certificate across several
    /// flip probabilities, with the exact lower Poincaré constant varying.
    Counterexample {
        /// Flip probabilities, each in [0, 1/4]
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.01, 0.05, 0.1, 0.2, 0.25])]
        eps: Vec<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze {
            chain,
            lyapunov,
            set,
            level_set,
            nonreversible,
            tol,
        } => commands::analyze(&chain, lyapunov, set, level_set, nonreversible, tol),
        Command::Ou {
            a,
            sigma,
            grid,
            l,
            out,
        } => commands::ou(a, sigma, grid, l, out),
        Command::Diffmap {
            potential,
            pot_c,
            pot_delta,
            epsilon,
            lambda0,
            r,
            grid,
            l,
        } => commands::diffmap(&potential, pot_c, pot_delta, epsilon, lambda0, r, grid, l),
        Command::Simulate {
            chain,
            mu0,
            beta_source,
            lyapunov,
            set,
            level_set,
            observable,
            steps,
            out,
        } => commands::simulate(
            &chain,
            &mu0,
            &beta_source,
            lyapunov,
            set,
            level_set,
            observable,
            steps,
            &out,
        ),
        Command::Counterexample { eps } => commands::counterexample(&eps),
    };
    match result {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("report is serializable"));
            ExitCode::SUCCESS
        }
        Err(err) => {
            let envelope = serde_json::json!({
                "error": {"kind": err.kind(), "detail": err.to_string()}
            });
            println!("{}", serde_json::to_string_pretty(&envelope).expect("envelope is serializable"));
            ExitCode::FAILURE
        }
    }
}

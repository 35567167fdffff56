//! Command-line front end: reproducible, scriptable experiments with
//! machine-readable outputs.
//!
//! Exit codes: 0 success, 1 configuration error, 2 solver failure,
//! 3 criticality gate, 4 stalled descent.

mod commands;
mod config;
mod profile_io;
mod report;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use config::{Format, Overrides};

#[derive(Parser)]
#[command(
    name = "voidstab",
    about = "Stability analysis of star-shaped cavities in a stretched elastic body",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CommonArgs {
    /// JSON configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Round cavity radius (exclusive with a profile file).
    #[arg(long, global = true)]
    r: Option<f64>,
    /// Profile file (JSON {R0, n_theta, values[]}).
    #[arg(long, global = true)]
    profile: Option<PathBuf>,
    /// Dirichlet stretch factor.
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Shear modulus μ.
    #[arg(long, global = true)]
    mu: Option<f64>,
    /// Second Lamé coefficient λ.
    #[arg(long, global = true)]
    lambda: Option<f64>,
    /// Outer radius.
    #[arg(long = "R0", global = true)]
    r0: Option<f64>,
    #[arg(long, global = true)]
    n_theta: Option<usize>,
    #[arg(long, global = true)]
    n_rho: Option<usize>,
    /// Fourier mode cutoff of the quadratic form.
    #[arg(long, global = true)]
    n_modes: Option<usize>,
    /// Penalty weight Λ of the volume term.
    #[arg(long = "lambda-penalty", global = true)]
    lambda_penalty: Option<f64>,
    /// Smoothing parameter of the optional proximity term.
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    /// Random seed (mandatory for probe).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output path (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the elastic equilibrium and report boundary traces.
    Solve {
        /// Write the displacement field to this JSON file.
        #[arg(long = "dump-field")]
        dump_field: Option<PathBuf>,
    },
    /// Assemble the constrained second-variation spectrum and verdict.
    Stability {
        /// Evaluate the full formula even when the pair is not critical.
        #[arg(long)]
        force: bool,
        /// Write the assembled matrices as CSV.
        #[arg(long = "dump-matrix")]
        dump_matrix: Option<PathBuf>,
    },
    /// Volume-constrained penalized descent from the given profile.
    Evolve {
        #[arg(long = "max-iter")]
        max_iter: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Stability landscape over a range of round radii.
    Sweep {
        #[arg(long = "r-min")]
        r_min: Option<f64>,
        #[arg(long = "r-max")]
        r_max: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Random-perturbation minimality probe around a critical profile.
    Probe {
        #[arg(long = "n-samples")]
        n_samples: Option<usize>,
        #[arg(long)]
        amplitude: Option<f64>,
        #[arg(long = "min-mode")]
        min_mode: Option<usize>,
        #[arg(long = "max-mode")]
        max_mode: Option<usize>,
    },
}

fn overrides_from(common: &CommonArgs, command: &Command) -> Overrides {
    let mut ov = Overrides {
        mu: common.mu,
        lambda: common.lambda,
        alpha: common.alpha,
        r0: common.r0,
        r: common.r,
        profile: common.profile.clone(),
        n_theta: common.n_theta,
        n_rho: common.n_rho,
        n_modes: common.n_modes,
        lambda_penalty: common.lambda_penalty,
        epsilon: common.epsilon,
        seed: common.seed,
        format: common.format,
        ..Overrides::default()
    };
    match command {
        Command::Evolve { max_iter, tol } => {
            ov.max_iter = *max_iter;
            ov.tol = *tol;
        }
        Command::Sweep { r_min, r_max, steps } => {
            ov.r_min = *r_min;
            ov.r_max = *r_max;
            ov.steps = *steps;
        }
        Command::Probe {
            n_samples,
            amplitude,
            min_mode,
            max_mode,
        } => {
            ov.n_samples = *n_samples;
            ov.amplitude = *amplitude;
            ov.min_mode = *min_mode;
            ov.max_mode = *max_mode;
        }
        _ => {}
    }
    ov
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ov = overrides_from(&cli.common, &cli.command);
    let cfg = match config::resolve(cli.common.config.as_deref(), &ov) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let out = cli.common.out.as_deref();
    let result = match &cli.command {
        Command::Solve { dump_field } => commands::cmd_solve(&cfg, out, dump_field.as_ref()),
        Command::Stability { force, dump_matrix } => {
            commands::cmd_stability(&cfg, out, *force, dump_matrix.as_ref())
        }
        Command::Evolve { .. } => commands::cmd_evolve(&cfg, out),
        Command::Sweep { .. } => commands::cmd_sweep(&cfg, out),
        Command::Probe { .. } => commands::cmd_probe(&cfg, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

//! Command-line runner: grids, projections, scenarios and reference checks.
//!
//! Exit status is 0 when the command succeeded and every verification it ran
//! passed, 1 when a verification failed, and 2 on errors.

mod artifacts;
mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use permflow::polar::Domain;

use commands::{Console, Reference, ReferenceParams, Vp1dParams, Vp1dTask};

#[derive(Debug, Parser)]
#[command(
    name = "permflow",
    version,
    about = "Particle approximation of incompressible Euler geodesics"
)]
struct Cli {
    /// Scenario file (flat TOML) for `evolve`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Suppress the summary printed on stdout.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

fn parse_domain(s: &str) -> std::result::Result<Domain, String> {
    s.parse().map_err(|e: permflow::Error| e.to_string())
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the cell-center grid of a domain.
    Grid {
        #[arg(long, value_parser = parse_domain)]
        domain: Domain,
        #[arg(long)]
        n: usize,
    },
    /// Rearrange a map onto the grid and certify optimality.
    Project {
        /// CSV with header `index,x[,y[,z]]`, one row per grid point.
        #[arg(long)]
        map: PathBuf,
        #[arg(long, value_parser = parse_domain)]
        domain: Domain,
        #[arg(long)]
        n: usize,
    },
    /// Run a scenario given by `--config`.
    Evolve,
    /// Check a closed-form reference solution.
    VerifyReference {
        #[arg(value_enum)]
        which: Reference,
        /// Disk grid resolution for the z quadrature.
        #[arg(long)]
        quadrature: Option<usize>,
        /// Number of circle directions.
        #[arg(long, default_value_t = 64)]
        directions: usize,
        /// Time frames for action quadrature.
        #[arg(long, default_value_t = 201)]
        frames: usize,
        #[arg(long, default_value_t = 1e-3)]
        dt_fd: f64,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        /// Scale the circle radius by 1.01 so that verification fails.
        #[arg(long)]
        corrupt_radius: bool,
    },
    /// One-dimensional sheet model checks.
    Vp1d {
        #[arg(value_enum)]
        task: Vp1dTask,
        #[arg(long, default_value_t = 64)]
        particles: usize,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 1e-3)]
        amplitude: f64,
        #[arg(long, default_value_t = 200)]
        steps_per_period: usize,
        /// Random states for `equivalence`.
        #[arg(long, default_value_t = 50)]
        states: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run length for `phase`, in oscillation periods.
        #[arg(long, default_value_t = 0.25)]
        fraction: f64,
        #[arg(long, default_value_t = 16)]
        x_bins: usize,
        #[arg(long, default_value_t = 32)]
        xi_bins: usize,
    },
}

fn run(cli: Cli) -> Result<bool> {
    let console = Console { quiet: cli.quiet };
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    match cli.command {
        Command::Grid { domain, n } => commands::grid(domain, n, &out, console),
        Command::Project { map, domain, n } => commands::project(&map, domain, n, &out, console),
        Command::Evolve => {
            let config = cli.config.context("evolve needs --config PATH")?;
            commands::evolve(&config, &out, console)
        }
        Command::VerifyReference {
            which,
            quadrature,
            directions,
            frames,
            dt_fd,
            tol,
            corrupt_radius,
        } => {
            let params = ReferenceParams {
                quadrature,
                directions,
                frames,
                dt_fd,
                tol,
                corrupt_radius,
            };
            commands::verify_reference(which, params, cli.out.as_deref(), console)
        }
        Command::Vp1d {
            task,
            particles,
            epsilon,
            amplitude,
            steps_per_period,
            states,
            seed,
            fraction,
            x_bins,
            xi_bins,
        } => {
            let params = Vp1dParams {
                particles,
                epsilon,
                amplitude,
                steps_per_period,
                states,
                seed,
                fraction,
                x_bins,
                xi_bins,
            };
            commands::vp1d(task, params, cli.out.as_deref(), console)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.quiet { "error" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(2)
        }
    }
}

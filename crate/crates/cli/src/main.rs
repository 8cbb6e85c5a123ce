//! `teich`: distances, projections and experiment runs on the torus model.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Overrides, RunConfig};

/// A failed command: `Usage` exits with 2, `Runtime` with 1.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

#[derive(Parser, Debug)]
#[command(name = "teich", version, about = "Coarse projections to Teichmüller geodesics of the torus")]
struct Cli {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (default: $TEICH_OUT_DIR, then ./teich_out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Depth of the slope enumeration used as an oracle.
    #[arg(long, global = true)]
    depth: Option<u32>,
    /// Solver tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Teichmüller distance between two points `x1 y1 x2 y2`.
    Distance {
        #[arg(num_args = 4, allow_negative_numbers = true, value_names = ["X1", "Y1", "X2", "Y2"])]
        coords: Vec<f64>,
    },
    /// Both coarse projections of `sigma` to the configured geodesic.
    Project {
        /// Geodesic: axis of `[[a, b], [c, d]]`.
        #[arg(long, num_args = 4, allow_negative_numbers = true, value_names = ["A", "B", "C", "D"])]
        axis: Option<Vec<i64>>,
    },
    /// Run an experiment: contract, stability, thin, pa-translation, sharpness, constants.
    Run {
        experiment: String,
        #[arg(long, num_args = 4, allow_negative_numbers = true, value_names = ["A", "B", "C", "D"])]
        axis: Option<Vec<i64>>,
    },
}

fn axis_array(v: &Option<Vec<i64>>) -> Option<[i64; 4]> {
    v.as_ref().map(|m| [m[0], m[1], m[2], m[3]])
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    let mut o = Overrides {
        seed: cli.seed,
        out: cli.out.clone(),
        depth: cli.depth,
        tol: cli.tol,
        ..Default::default()
    };
    match &cli.command {
        Command::Distance { coords } => {
            let file = RunConfig::load(cli.config.as_deref())?.apply(&o);
            commands::distance([coords[0], coords[1], coords[2], coords[3]], file.depth)
        }
        Command::Project { axis } => {
            o.axis = axis_array(axis);
            commands::project(&RunConfig::load(cli.config.as_deref())?.apply(&o))
        }
        Command::Run { experiment, axis } => {
            o.axis = axis_array(axis);
            o.experiment = Some(experiment.clone());
            commands::run(&RunConfig::load(cli.config.as_deref())?.apply(&o))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

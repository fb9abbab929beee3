//! `tropamoeba`: amoebae, tropical curves and their scaling limits from the
//! command line.

mod commands;
mod config;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use log::error;

use commands::Outcome;
use config::{FileConfig, Overrides, Settings};

/// Exit code when an experiment ran but missed its criterion.
const EXIT_CRITERION: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "tropamoeba", version, about = "Amoebae, tropicalizations and their scaling limits")]
struct Cli {
    /// Worker threads for the parallel loops (defaults to all cores)
    #[arg(long, global = true, env = "TROPAMOEBA_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// Experiment config file (TOML); flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Polynomial document (JSON)
    #[arg(long)]
    poly: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Square window as lo,hi
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    window: Option<Vec<f64>>,
    /// Amoeba samples per parameter value
    #[arg(long)]
    samples: Option<usize>,
    /// Specialize a t-family at this value first (e.g. 0.5 or 0.3+0.4i)
    #[arg(long, allow_hyphen_values = true)]
    at: Option<String>,
}

#[derive(Args, Debug, Clone, Default)]
struct Experiment {
    /// Scaling parameters, strictly decreasing
    #[arg(long, value_delimiter = ',')]
    rhos: Option<Vec<f64>>,
    /// Values of t, strictly decreasing in modulus
    #[arg(long = "as", value_delimiter = ',', allow_hyphen_values = true)]
    a_values: Option<Vec<String>>,
    /// Weights of the monomial valuation
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    /// Degree d of the polytope d * (unit triangle)
    #[arg(long)]
    degree: Option<u32>,
    /// Polytope document (JSON with lattice_points)
    #[arg(long)]
    polytope: Option<PathBuf>,
    /// Complex discretization: arclength step = window diagonal / grid
    #[arg(long)]
    grid: Option<usize>,
    /// Polycircle phase samples per axis
    #[arg(long)]
    phases: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Corner locus of the tropicalization
    Trop {
        #[command(flatten)]
        common: Common,
    },
    /// Sample the amoeba
    Amoeba {
        #[command(flatten)]
        common: Common,
        /// Scale the sampled cloud by this factor
        #[arg(long)]
        scale: Option<f64>,
    },
    /// Scaled amoebae against the trivial-valuation tropicalization
    ConvergeA {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        exp: Experiment,
    },
    /// Scaled fibers of a t-family against its t-adic tropicalization
    FamilyB {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        exp: Experiment,
    },
    /// Polycircle suprema against the monomial valuation
    Polycircle {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        exp: Experiment,
    },
    /// Compactified amoebae and tropical curve in the moment polytope
    Moment {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        exp: Experiment,
    },
}

fn settings(kind: &str, common: Common, exp: Experiment) -> Result<Settings> {
    let file = common.config.as_deref().map(FileConfig::load).transpose()?;
    let flags = Overrides {
        poly: common.poly,
        out: common.out,
        seed: common.seed,
        window: common.window,
        samples: common.samples,
        at: common.at,
        rhos: exp.rhos,
        a_values: exp.a_values,
        alpha: exp.alpha,
        degree: exp.degree,
        polytope: exp.polytope,
        grid: exp.grid,
        phases: exp.phases,
    };
    Settings::resolve(kind, file, flags)
}

fn run(cli: Cli) -> Result<Outcome> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match cli.command {
        Command::Trop { common } => commands::trop(&settings("trop", common, Experiment::default())?),
        Command::Amoeba { common, scale } => {
            commands::amoeba(&settings("amoeba", common, Experiment::default())?, scale)
        }
        Command::ConvergeA { common, exp } => commands::converge_a_cmd(&settings("converge-a", common, exp)?),
        Command::FamilyB { common, exp } => commands::family_b_cmd(&settings("family-b", common, exp)?),
        Command::Polycircle { common, exp } => commands::polycircle(&settings("polycircle", common, exp)?),
        Command::Moment { common, exp } => commands::moment(&settings("moment", common, exp)?),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(Outcome::Passed) => ExitCode::SUCCESS,
        Ok(Outcome::Failed(why)) => {
            error!("{why}");
            ExitCode::from(EXIT_CRITERION)
        }
        Err(e) => {
            error!("{e:#}");
            ExitCode::FAILURE
        }
    }
}

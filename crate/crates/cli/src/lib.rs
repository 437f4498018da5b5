//! Command-line front end for `arclen-core`: CSV ingestion, run
//! configuration, JSON reports and SVG plots.

pub mod commands;
pub mod config;
pub mod csvio;
pub mod error;
pub mod report;
pub mod svg;

use std::path::PathBuf;

use arclen_core::{PenaltyKind, SolverConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::Outcome;
pub use config::{AlphaGrid, Emit, RunConfig};
pub use csvio::{load_points, load_points_from_str};
pub use error::{CliError, InputError};
pub use report::{Num, Report, SCHEMA};

#[derive(Debug, Parser)]
#[command(
    name = "arclen-reg",
    version,
    about = "Arc-length regularized broken-line fitting"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit broken lines for every requested penalty and coefficient.
    Fit(RunArgs),
    /// Print the upper bound (max y - min y) / epsilon; no solve.
    Bound(BoundArgs),
    /// Sweep a coefficient grid and summarize how fast fits flatten.
    Path(RunArgs),
    /// Run the bundled examples and print a pass/fail table.
    Examples(ExamplesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PenaltyArg {
    Arclength,
    Ridge,
    Lasso,
    All,
}

impl PenaltyArg {
    fn kinds(self) -> Vec<PenaltyKind> {
        match self {
            PenaltyArg::Arclength => vec![PenaltyKind::ArcLength],
            PenaltyArg::Ridge => vec![PenaltyKind::RidgeSlopes],
            PenaltyArg::Lasso => vec![PenaltyKind::LassoSlopes],
            PenaltyArg::All => PenaltyKind::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EmitArg {
    Svg,
    Json,
    Csv,
}

fn emit_flags(list: &[EmitArg]) -> Emit {
    if list.is_empty() {
        return Emit::default();
    }
    Emit {
        svg: list.contains(&EmitArg::Svg),
        json: list.contains(&EmitArg::Json),
        csv: list.contains(&EmitArg::Csv),
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "arclength")]
    pub penalty: PenaltyArg,
    /// Comma-separated coefficients, increasing.
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Comma-separated fractions of the bound; needs --epsilon.
    #[arg(long, value_delimiter = ',')]
    pub grid_fractions: Option<Vec<f64>>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Comma-separated subset of svg,json,csv (default: all).
    #[arg(long, value_enum, value_delimiter = ',')]
    pub emit: Vec<EmitArg>,
    #[arg(long)]
    pub grad_tol: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
}

impl RunArgs {
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let mut solver = SolverConfig::default();
        if let Some(t) = self.grad_tol {
            solver.grad_tol = t;
        }
        if let Some(m) = self.max_iters {
            solver.max_iters = m;
        }
        let cfg = RunConfig {
            input: self.input,
            penalties: self.penalty.kinds(),
            grid: AlphaGrid::from_options(self.alpha, self.epsilon, self.grid_fractions)?,
            solver,
            out: self.out,
            emit: emit_flags(&self.emit),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',')]
    pub emit: Vec<EmitArg>,
}

#[derive(Debug, Args)]
pub struct ExamplesArgs {
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',')]
    pub emit: Vec<EmitArg>,
}

fn fit_lines(report: &Report) -> String {
    let mut out = String::new();
    let fits = report
        .fits
        .iter()
        .chain(report.paths.iter().flat_map(|p| &p.entries));
    for f in fits {
        out.push_str(&format!(
            "{:<10} alpha {:<24} {:<15} J {:<24} |grad| {:.3e}  dist {:.6e}\n",
            f.penalty,
            f.alpha.0,
            format!("{:?}", f.status),
            f.objective.0,
            f.grad_inf_norm.0,
            f.distance_to_average_line.0,
        ));
    }
    out
}

/// Runs a parsed command line, printing a short summary to stdout.
pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Fit(args) => {
            let art = commands::cmd_fit(&args.into_config()?)?;
            print!("{}", fit_lines(&art.report));
            Ok(art.outcome())
        }
        Command::Path(args) => {
            let art = commands::cmd_path(&args.into_config()?)?;
            print!("{}", fit_lines(&art.report));
            Ok(art.outcome())
        }
        Command::Bound(args) => {
            let (_, b) =
                commands::cmd_bound(&args.input, args.epsilon, &args.out, emit_flags(&args.emit))?;
            println!(
                "alpha_bar = {}  (range {}, epsilon {}{})",
                b.alpha_bar,
                b.y_range,
                b.epsilon,
                if b.degenerate { ", degenerate" } else { "" }
            );
            Ok(Outcome::Clean)
        }
        Command::Examples(args) => {
            let runs = commands::cmd_examples(&args.out, emit_flags(&args.emit))?;
            print!("{}", commands::check_table(&runs));
            let failed = runs.iter().any(|(_, a)| a.outcome() != Outcome::Clean);
            Ok(if failed {
                Outcome::NotConverged
            } else {
                Outcome::Clean
            })
        }
    }
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{CommandKind, EngineKind, ExperimentConfig, Format, Right, Scheme, Style, TableName};

#[derive(Debug, Parser)]
#[command(
    name = "dualpricer",
    version,
    about = "Put-call duality pricing, American option tables and short-maturity static hedges",
    after_help = "Exit status: 0 on success, 1 on a numerical or domain failure, 2 on a usage error.\n\
                  DUALPRICER_SEED sets the default simulation seed."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Price one option directly and, with --dual, through its dual.
    Price(PriceArgs),
    /// Emit one of the standard experiment tables t1..t7.
    Table(TableArgs),
    /// Solve static hedge weights and report hedge errors.
    Hedge(HedgeArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(short, long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Read defaults from a flat key-value experiment file.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Save the effective experiment (file values merged with flags).
    #[arg(long, value_name = "PATH")]
    pub save_config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PriceArgs {
    #[arg(long, value_enum)]
    pub style: Option<Style>,
    #[arg(long, value_enum)]
    pub right: Option<Right>,
    #[arg(short = 'S', long = "spot")]
    pub spot: Option<f64>,
    #[arg(short = 'K', long = "strike")]
    pub strike: Option<f64>,
    #[arg(short = 'r', long = "rate", allow_negative_numbers = true)]
    pub rate: Option<f64>,
    /// Dividend yield, or the foreign rate for currency options.
    #[arg(short = 'q', long = "yield", allow_negative_numbers = true)]
    pub dividend_yield: Option<f64>,
    #[arg(long)]
    pub vol: Option<f64>,
    #[arg(short = 'T', long = "maturity")]
    pub maturity: Option<f64>,
    /// Defaults to analytic for European and lattice for American exercise.
    #[arg(long, value_enum)]
    pub engine: Option<EngineKind>,
    /// Lattice steps (default 365).
    #[arg(long)]
    pub steps: Option<usize>,
    /// Also price the dual problem and show the discrepancy.
    #[arg(long)]
    pub dual: bool,
    /// Include delta and gamma.
    #[arg(long)]
    pub greeks: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
#[command(next_help_heading = "Hedge setup")]
pub struct HedgeSetup {
    /// Strike of the hedged call.
    #[arg(long = "K")]
    pub target_strike: Option<f64>,
    /// Maturity of the hedged call.
    #[arg(long = "T")]
    pub target_maturity: Option<f64>,
    #[arg(long = "Kd")]
    pub strike_down: Option<f64>,
    #[arg(long = "Kc")]
    pub strike_center: Option<f64>,
    #[arg(long = "Ku")]
    pub strike_up: Option<f64>,
    /// Maturity of the down and up legs.
    #[arg(long = "To")]
    pub front_maturity: Option<f64>,
    /// Maturity of the center leg.
    #[arg(long = "Tc")]
    pub center_maturity: Option<f64>,
    /// End of the hedge.
    #[arg(long = "Th")]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub vol: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub rate: Option<f64>,
    #[arg(long = "yield", allow_negative_numbers = true)]
    pub dividend_yield: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(value_enum)]
    pub name: Option<TableName>,
    /// Simulation seed for t7 (default: DUALPRICER_SEED, else 42).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Simulated paths per row for t7 (default 10000).
    #[arg(long)]
    pub paths: Option<usize>,
    /// Show only this scheme's columns (t4..t7).
    #[arg(long, value_enum)]
    pub scheme: Option<Scheme>,
    /// Lattice steps for t1..t3 (default 365).
    #[arg(long)]
    pub steps: Option<usize>,
    #[command(flatten)]
    pub setup: HedgeSetup,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct HedgeArgs {
    #[arg(long, value_enum)]
    pub scheme: Option<Scheme>,
    /// Spot at setup; adds the net cost.
    #[arg(long)]
    pub spot0: Option<f64>,
    /// Spot at the end of the hedge; adds the gross error (and true error with --spot0).
    #[arg(long = "spot-th", conflicts_with = "sim")]
    pub spot_at_horizon: Option<f64>,
    /// Report simulated error statistics instead of a single path.
    #[arg(long)]
    pub sim: bool,
    /// Real-world drift for --sim (default 0.04).
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// Paths for --sim (default 10000).
    #[arg(long)]
    pub paths: Option<usize>,
    /// Seed for --sim (default: DUALPRICER_SEED, else 42).
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub setup: HedgeSetup,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn flag(set: bool) -> Option<bool> {
    set.then_some(true)
}

impl OutputArgs {
    fn apply(&self, cfg: ExperimentConfig) -> ExperimentConfig {
        ExperimentConfig {
            format: self.format,
            output: self.output.clone(),
            ..cfg
        }
    }
}

impl HedgeSetup {
    fn apply(&self, cfg: ExperimentConfig) -> ExperimentConfig {
        ExperimentConfig {
            target_strike: self.target_strike,
            target_maturity: self.target_maturity,
            strike_down: self.strike_down,
            strike_center: self.strike_center,
            strike_up: self.strike_up,
            front_maturity: self.front_maturity,
            center_maturity: self.center_maturity,
            horizon: self.horizon,
            vol: self.vol,
            rate: self.rate,
            dividend_yield: self.dividend_yield,
            ..cfg
        }
    }
}

impl Command {
    pub fn kind(&self) -> CommandKind {
        match self {
            Command::Price(_) => CommandKind::Price,
            Command::Table(_) => CommandKind::Table,
            Command::Hedge(_) => CommandKind::Hedge,
        }
    }

    pub fn output_args(&self) -> &OutputArgs {
        match self {
            Command::Price(a) => &a.out,
            Command::Table(a) => &a.out,
            Command::Hedge(a) => &a.out,
        }
    }

    /// Values given on the command line; unset flags stay `None`.
    pub fn to_config(&self) -> ExperimentConfig {
        let base = ExperimentConfig {
            command: Some(self.kind()),
            ..Default::default()
        };
        match self {
            Command::Price(a) => a.out.apply(ExperimentConfig {
                style: a.style,
                right: a.right,
                spot: a.spot,
                strike: a.strike,
                rate: a.rate,
                dividend_yield: a.dividend_yield,
                vol: a.vol,
                maturity: a.maturity,
                engine: a.engine,
                steps: a.steps,
                dual: flag(a.dual),
                greeks: flag(a.greeks),
                ..base
            }),
            Command::Table(a) => a.out.apply(a.setup.apply(ExperimentConfig {
                table: a.name,
                seed: a.seed,
                paths: a.paths,
                scheme: a.scheme,
                steps: a.steps,
                ..base
            })),
            Command::Hedge(a) => a.out.apply(a.setup.apply(ExperimentConfig {
                scheme: a.scheme,
                spot0: a.spot0,
                spot_at_horizon: a.spot_at_horizon,
                sim: flag(a.sim),
                drift: a.mu,
                paths: a.paths,
                seed: a.seed,
                ..base
            })),
        }
    }
}

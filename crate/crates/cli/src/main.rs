//! `maxdet`: certified lower bounds on maximal determinants of ±1 matrices.
//!
//! Reports go to stdout as JSON (or CSV where noted); progress goes to
//! stderr. The exit status is 0 only when every requested check passes.

mod cache;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use maxdet::border::{GreedyOrder, Objective};
use maxdet::construct::{Method, Recipe};
use maxdet::sieve::RuleSet;

#[derive(Parser, Debug)]
#[command(name = "maxdet", version, about = "Certified lower bounds on maximal ±1 determinants")]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Sieve limit.
    #[arg(long, global = true, default_value_t = 65536)]
    pub max: u64,
    /// Bordering trials per search.
    #[arg(long, global = true, default_value_t = 256)]
    pub trials: u64,
    /// Master seed of the trial streams.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Construction family for the core matrix.
    #[arg(long, global = true, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    /// Sieve rules, as `all` or a comma-separated list of rule ids.
    #[arg(long, global = true, default_value = "all")]
    pub rules: RuleSet,
    /// Allow expensive work (large table rows, the order-6 oracle).
    #[arg(long, global = true)]
    pub slow: bool,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Sieve cache file.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Rebuild the sieve even if a cache exists.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Paley1,
    Paley2,
    Conference,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Paley1 => Method::PaleyOne,
            MethodArg::Paley2 => Method::PaleyTwo,
            MethodArg::Conference => Method::Conference,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    RowMajor,
    ColumnMajor,
}

impl From<OrderArg> for GreedyOrder {
    fn from(o: OrderArg) -> GreedyOrder {
        match o {
            OrderArg::RowMajor => GreedyOrder::RowMajor,
            OrderArg::ColumnMajor => GreedyOrder::ColumnMajor,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    AbsDet,
    SignedDet,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Objective {
        match o {
            ObjectiveArg::AbsDet => Objective::AbsDet,
            ObjectiveArg::SignedDet => Objective::SignedDet,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the order sieve and report its calibration.
    Sieve {
        /// Include every member in the report.
        #[arg(long)]
        list: bool,
    },
    /// Maximal gap between consecutive orders and the 6d^3 > h region.
    Gaps {
        /// Gap function argument; defaults to --max.
        #[arg(long)]
        x: Option<u64>,
    },
    /// Split n into h + d with h the largest known order <= n.
    Resolve { n: u64 },
    /// Formula bounds and a constructive bound for order n.
    Bound {
        n: u64,
        /// Also write the best trial as a witness file.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Randomized bordering search.
    Search {
        /// Target order; the core is planned as for `bound`.
        n: Option<u64>,
        /// Explicit core recipe, e.g. `paley1(331);double`.
        #[arg(long)]
        recipe: Option<Recipe>,
        /// Border width, with --recipe.
        #[arg(long)]
        width: Option<usize>,
        #[arg(long, value_enum, default_value_t = OrderArg::RowMajor)]
        greedy_order: OrderArg,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::AbsDet)]
        objective: ObjectiveArg,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Recompute a witness file from scratch.
    Verify {
        path: PathBuf,
        /// Also take the full determinant for orders up to this size.
        #[arg(long, default_value_t = 64)]
        direct_check_limit: usize,
    },
    /// Run the inequality property suites.
    Lemmas {
        /// Tighten the rank-one tight cases so the suite must fail.
        #[arg(long)]
        inject_violation: bool,
    },
    /// Exhaustive D(n) for n <= 6 (n = 6 needs --slow).
    Oracle { n: usize },
    /// Reproduce the exceptional-interval table.
    Table1,
}

fn configure_threads() {
    if let Some(n) = std::env::var("MAXDET_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                log::warn!("could not cap threads: {e}");
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    configure_threads();
    let outcome = match cli.command {
        Command::Sieve { list } => commands::sieve(&cli.opts, list),
        Command::Gaps { x } => commands::gaps(&cli.opts, x),
        Command::Resolve { n } => commands::resolve(&cli.opts, n),
        Command::Bound { n, witness } => commands::bound(&cli.opts, n, witness.as_deref()),
        Command::Search { n, recipe, width, greedy_order, objective, witness } => commands::search(
            &cli.opts,
            commands::SearchTarget { n, recipe, width },
            greedy_order.into(),
            objective.into(),
            witness.as_deref(),
        ),
        Command::Verify { path, direct_check_limit } => commands::verify(&cli.opts, &path, direct_check_limit),
        Command::Lemmas { inject_violation } => commands::lemmas(&cli.opts, inject_violation),
        Command::Oracle { n } => commands::oracle(&cli.opts, n),
        Command::Table1 => commands::table1(&cli.opts),
    };
    match outcome.and_then(|o| commands::emit(&cli.opts, &o).map(|()| o.ok)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            log::error!("{e:#}");
            ExitCode::from(2)
        }
    }
}

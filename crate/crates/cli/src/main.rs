mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use learncomp::classes::{ClassError, DEFAULT_EVAL_BUDGET};
use learncomp::dimensions::{DimensionError, Measure};
use learncomp::games::GameError;

use output::Format;

pub const EXIT_ERROR: u8 = 1;
pub const EXIT_STILL_RUNNING: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;
pub const EXIT_PROTOCOL: u8 = 4;
/// Bad command line (sysexits EX_USAGE), kept apart from the 2 of `simulate`.
pub const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "learncomp", version, about = "Learnability measures of computably indexed classes")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
pub struct Global {
    /// Master seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Step budget: machine steps for simulate/reduce/suite, search steps
    /// for dim/teach/tree/game.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Largest number of class evaluations one window may take.
    #[arg(long, global = true, env = "LEARNCOMP_EVAL_BUDGET", default_value_t = DEFAULT_EVAL_BUDGET)]
    pub eval_budget: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// Which class to work on and, for indexed classes, which window.
#[derive(Args)]
pub struct ClassArgs {
    /// `step`, `halting:<file>`, `goedel:<system>`, `goedel_prefix:<system>`,
    /// `hypercube:<k>`, or `@<file.json>` holding a class spec.
    #[arg(long)]
    pub class: String,
    /// Largest domain point N of the window.
    #[arg(long)]
    pub window: Option<u64>,
    /// Number of indices M (default 2^(N+1)).
    #[arg(long, requires = "window")]
    pub indices: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum LearnerKind {
    Soa,
    Constant0,
    Constant1,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum AdversaryKind {
    Tree,
    RandomConsistent,
    MajorityFlip,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum LabelingKind {
    Layer,
    Active,
}

#[derive(Subcommand)]
enum Command {
    /// Run a machine on the empty tape.
    Simulate { machine: PathBuf },
    /// Compute a dimension on one window or across a schedule.
    Dim {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, value_parser = parse_measure)]
        measure: Measure,
        /// `default` or a comma list of N values.
        #[arg(long, conflicts_with = "window")]
        schedule: Option<String>,
    },
    /// Minimum teaching sets, or the escape threshold for a zero sample.
    Teach {
        #[command(flatten)]
        class: Option<ClassArgs>,
        /// Index m of the concept to teach (default: every concept).
        #[arg(long)]
        witness: Option<u64>,
        /// Comma list of zero-labelled points.
        #[arg(long, conflicts_with_all = ["class", "witness"], value_delimiter = ',')]
        escape: Option<Vec<u64>>,
    },
    /// Layer-uniform Littlestone tree with per-path witnesses.
    Tree {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long)]
        depth: u32,
        #[arg(long, value_enum, default_value_t = LabelingKind::Layer)]
        labeling: LabelingKind,
        #[arg(long, default_value_t = 10_000)]
        scan_limit: u64,
    },
    /// Play the online mistake-bound game.
    Game {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, value_enum, default_value_t = LearnerKind::Soa)]
        learner: LearnerKind,
        #[arg(long, value_enum, default_value_t = AdversaryKind::Tree)]
        adversary: AdversaryKind,
        #[arg(long, default_value_t = 32)]
        rounds: usize,
    },
    /// PAC experiment with ERM under the uniform distribution.
    Pac {
        #[command(flatten)]
        class: ClassArgs,
        /// Index m of the target concept (default: the largest).
        #[arg(long)]
        target: Option<u64>,
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        /// Comma list of sample sizes (default: the sample-size bound).
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
    },
    /// Decide halting through the class code and a budgeted VC decider.
    Reduce { machine: PathBuf },
    /// Compare the reduction with direct simulation on many machines.
    Suite {
        /// Machine files (default: the built-in 15-machine suite).
        machines: Vec<PathBuf>,
    },
}

fn parse_measure(s: &str) -> Result<Measure, String> {
    s.parse::<Measure>().map_err(|e| e.to_string())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<DimensionError>() {
            if matches!(
                e,
                DimensionError::BudgetExceeded { .. }
                    | DimensionError::Unresolved(_)
                    | DimensionError::Class(ClassError::WindowTooLarge { .. })
            ) {
                return EXIT_BUDGET;
            }
        }
        if matches!(cause.downcast_ref::<ClassError>(), Some(ClassError::WindowTooLarge { .. })) {
            return EXIT_BUDGET;
        }
        if matches!(cause.downcast_ref::<GameError>(), Some(GameError::ProtocolViolation { .. })) {
            return EXIT_PROTOCOL;
        }
    }
    EXIT_ERROR
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let g = &cli.global;
    let result = match cli.command {
        Command::Simulate { machine } => commands::simulate(g, &machine),
        Command::Dim {
            class,
            measure,
            schedule,
        } => commands::dim(g, &class, measure, schedule.as_deref()),
        Command::Teach { class, witness, escape } => commands::teach(g, class.as_ref(), witness, escape),
        Command::Tree {
            class,
            depth,
            labeling,
            scan_limit,
        } => commands::tree(g, &class, depth, labeling, scan_limit),
        Command::Game {
            class,
            learner,
            adversary,
            rounds,
        } => commands::game(g, &class, learner, adversary, rounds),
        Command::Pac {
            class,
            target,
            epsilon,
            delta,
            trials,
            sizes,
        } => commands::pac(g, &class, target, epsilon, delta, trials, sizes),
        Command::Reduce { machine } => commands::reduce(g, &machine),
        Command::Suite { machines } => commands::suite(g, &machines),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

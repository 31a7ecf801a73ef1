use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nichols_cli::{parse_numeration, parse_scenario, run, CliError, RunOptions, Scenario, Task};

#[derive(Parser)]
#[command(name = "nichols", version, about = "Nichols algebras, Cartan data and Weyl groupoids of Yetter-Drinfeld modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hilbert series of B(W) for each target
    Hilbert(Common),
    /// Cartan entries of the target family
    Cartan(Common),
    /// Reflect the target family at one block
    Reflect {
        #[command(flatten)]
        common: Common,
        /// 1-indexed block (overrides `reflect_at`)
        #[arg(long)]
        at: Option<usize>,
    },
    /// Explore the Weyl groupoid (JSON, plus DOT next to --out)
    Groupoid(Common),
    /// Real roots of the Weyl groupoid
    Roots(Common),
    /// Evaluate a derivation/adjoint expression, e.g. `(d x3 (d y1 (ad x2 (ad x1 y2))))`
    Derive {
        #[command(flatten)]
        common: Common,
        /// expression (overrides `expression`)
        #[arg(long)]
        expr: Option<String>,
    },
    /// Run the regression matrix; a scenario replaces the FK3 module of the first check
    VerifyPaper(OptionalScenario),
    /// Run the task named in the scenario
    Run(Common),
}

#[derive(Args)]
struct Flags {
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long)]
    node_limit: Option<usize>,
    /// print the JSON report on stdout
    #[arg(long)]
    json: bool,
    /// write the JSON report here (CSV and DOT tables go alongside)
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON file of numeration overrides keyed by module id
    #[arg(long)]
    numeration: Option<PathBuf>,
}

#[derive(Args)]
struct Common {
    scenario: PathBuf,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct OptionalScenario {
    scenario: Option<PathBuf>,
    #[command(flatten)]
    flags: Flags,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Internal(format!("{}: {e}", path.display())))
}

fn execute(task: Option<Task>, scenario: Option<&Path>, flags: &Flags, mut opts: RunOptions) -> Result<i32, CliError> {
    let scenario: Option<Scenario> = scenario.map(|p| read(p).and_then(|t| parse_scenario(&t))).transpose()?;
    let task = match task.or_else(|| scenario.as_ref().and_then(|s| s.task)) {
        Some(t) => t,
        None => return Err(CliError::Schema("task: missing from scenario".into())),
    };
    opts.cap = flags.cap;
    opts.node_limit = flags.node_limit;
    if let Some(p) = &flags.numeration {
        opts.numeration = Some(parse_numeration(&read(p)?)?);
    }
    let outcome = run(scenario.as_ref(), task, &opts)?;
    if let Some(out) = &flags.out {
        write(out, &outcome.report_json())?;
        if let Some(csv) = &outcome.csv {
            write(&out.with_extension("csv"), csv)?;
        }
        if let Some(dot) = &outcome.dot {
            write(&out.with_extension("dot"), dot)?;
        }
    }
    if flags.json {
        print!("{}", outcome.report_json());
    } else {
        print!("{}", outcome.summary);
    }
    if let Some(r) = &outcome.refusal {
        log::info!("refused: {r}");
    }
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let none = RunOptions::default();
    let result = match &cli.command {
        Command::Hilbert(c) => execute(Some(Task::Hilbert), Some(&c.scenario), &c.flags, none),
        Command::Cartan(c) => execute(Some(Task::Cartan), Some(&c.scenario), &c.flags, none),
        Command::Reflect { common, at } => execute(Some(Task::Reflect), Some(&common.scenario), &common.flags, RunOptions { reflect_at: *at, ..none }),
        Command::Groupoid(c) => execute(Some(Task::Groupoid), Some(&c.scenario), &c.flags, none),
        Command::Roots(c) => execute(Some(Task::Roots), Some(&c.scenario), &c.flags, none),
        Command::Derive { common, expr } => execute(Some(Task::Derive), Some(&common.scenario), &common.flags, RunOptions { expression: expr.clone(), ..none }),
        Command::VerifyPaper(c) => execute(Some(Task::VerifyPaper), c.scenario.as_deref(), &c.flags, none),
        Command::Run(c) => execute(None, Some(&c.scenario), &c.flags, none),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("nichols: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use backdet::cli::{self, CheckConfig, CheckMode, CmdResult, Failure};
use clap::{Parser, Subcommand};

/// Weak alternating automata to backward deterministic automata.
#[derive(Parser)]
#[command(name = "backdet", version)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Translate an LTL formula into a very weak automaton.
    Ltl2waa {
        formula: String,
        /// Letters, space or comma separated. Inferred from the formula if absent.
        #[arg(long)]
        alphabet: Option<String>,
        /// Atomic propositions; the alphabet becomes their valuations.
        #[arg(long, conflicts_with = "alphabet")]
        props: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Translate an alternation-free guarded νTL tuple into a weak automaton.
    Nutl2waa {
        file: PathBuf,
        #[arg(long)]
        alphabet: Option<String>,
        /// One state per variable.
        #[arg(long)]
        optimized: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the rank formulas describing acceptance of an NBA.
    Nba2nutl {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build the backward deterministic automaton of a weak automaton.
    Waa2bda {
        file: PathBuf,
        /// Also list the transition table when there are at most CAP families.
        #[arg(long, value_name = "CAP")]
        enumerate: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Show the final run on a lasso next to the oracle.
    Run {
        /// A weak automaton, or an NBA (recognised by its `trans` lines).
        file: PathBuf,
        /// `u ; v`. Read from a `# lasso:` line of the file if absent.
        lasso: Option<String>,
    },
    /// Check random instances against the oracles.
    Check {
        #[arg(long)]
        mode: CheckMode,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        max_prefix: Option<usize>,
        #[arg(long)]
        max_period: Option<usize>,
        /// Formula size, or number of states for nba and dual.
        #[arg(long)]
        max_size: Option<usize>,
        /// Where to write a reproducer for the first counterexample.
        #[arg(long)]
        repro_dir: Option<PathBuf>,
    },
    /// Graphviz output: the automaton, or with a lasso the period map.
    Dot {
        file: PathBuf,
        #[arg(long)]
        lasso: Option<String>,
        #[arg(long, default_value_t = 4096)]
        cap: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure {
        code: cli::EXIT_PARSE,
        message: format!("{}: {e}", path.display()),
    })
}

fn execute(command: Command) -> Result<(), Failure> {
    let (result, output): (CmdResult, Option<PathBuf>) = match command {
        Command::Ltl2waa { formula, alphabet, props, output } => {
            (cli::cmd_ltl2waa(&formula, alphabet.as_deref(), props.as_deref()), output)
        }
        Command::Nutl2waa { file, alphabet, optimized, output } => {
            (cli::cmd_nutl2waa(&read(&file)?, alphabet.as_deref(), optimized), output)
        }
        Command::Nba2nutl { file, output } => (cli::cmd_nba2nutl(&read(&file)?), output),
        Command::Waa2bda { file, enumerate, output } => (cli::cmd_waa2bda(&read(&file)?, enumerate), output),
        Command::Run { file, lasso } => (cli::cmd_run(&read(&file)?, lasso.as_deref()), None),
        Command::Check { mode, count, seed, max_prefix, max_period, max_size, repro_dir } => {
            let mut cfg = CheckConfig::new(mode);
            cfg.count = count.unwrap_or(cfg.count);
            cfg.seed = seed.unwrap_or(cfg.seed);
            cfg.max_prefix = max_prefix.unwrap_or(cfg.max_prefix);
            cfg.max_period = max_period.unwrap_or(cfg.max_period);
            cfg.max_size = max_size.unwrap_or(cfg.max_size);
            cfg.repro_dir = repro_dir;
            (cli::cmd_check(&cfg), None)
        }
        Command::Dot { file, lasso, cap, output } => (cli::cmd_dot(&read(&file)?, lasso.as_deref(), cap), output),
    };
    let out = result?;
    match output {
        Some(path) => std::fs::write(&path, &out.artifact).map_err(|e| Failure {
            code: cli::EXIT_PARSE,
            message: format!("{}: {e}", path.display()),
        })?,
        None => print!("{}", out.artifact),
    }
    // Reports go to stderr unless they are the only output.
    if out.artifact.is_empty() {
        println!("{}", out.report.trim_end());
    } else if !out.report.is_empty() {
        eprintln!("{}", out.report.trim_end());
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Args::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

//! Command-line front end for the `pba` library.
//!
//! [`run`] parses an argument vector, dispatches to the library and returns
//! the exit code together with everything that would be printed, so the
//! binary is a thin wrapper and tests can call it directly.

mod commands;
mod export;
mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use pba::{parse_rational, Budget, Rational};

/// Exit code, standard output and standard error of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

pub const BUDGET_ENV: &str = "PBA_BUDGET";

#[derive(Debug, Error)]
pub(crate) enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot access `{path}`: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("`{path}`: {source}")]
    Input { path: PathBuf, source: pba::Error },
    #[error(transparent)]
    Core(#[from] pba::Error),
    /// A bounded search ended without an answer.
    #[error("{0}")]
    Incomplete(String),
}

impl CliError {
    fn code(&self) -> i32 {
        let core = match self {
            CliError::Core(e) | CliError::Input { source: e, .. } => e,
            CliError::Incomplete(_) => return EXIT_BUDGET,
            _ => return EXIT_USAGE,
        };
        match core {
            pba::Error::BudgetExceeded { .. } | pba::Error::Indeterminate(_) => EXIT_BUDGET,
            _ => EXIT_USAGE,
        }
    }

    fn hint(&self) -> Option<&'static str> {
        match self {
            CliError::Core(pba::Error::BudgetExceeded { .. }) => {
                Some("raise the limit with --budget N or the PBA_BUDGET environment variable")
            }
            CliError::Core(pba::Error::Unsupported(_)) => Some("pass --allow-k K to lift the cap on k"),
            CliError::Incomplete(_) => Some("raise --max-len"),
            _ => None,
        }
    }
}

pub(crate) type CliResult<T> = Result<T, CliError>;

pub(crate) fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn rational_arg(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

#[derive(Parser, Debug)]
#[command(
    name = "pba",
    version,
    about = "Analyse finitely ambiguous probabilistic automata",
    disable_help_subcommand = true
)]
struct Cli {
    /// Machine-readable `key<TAB>value` output.
    #[arg(long, global = true)]
    porcelain: bool,

    /// Node/word budget for searches (overrides PBA_BUDGET).
    #[arg(long, global = true, value_name = "N")]
    budget: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ambiguity class of an automaton.
    Classify {
        file: PathBuf,
        /// Largest k tried when computing the exact degree.
        #[arg(long, value_name = "N")]
        max_k: Option<usize>,
        /// Also print the largest run count per length up to L.
        #[arg(long, value_name = "L")]
        profile: Option<usize>,
    },
    /// Is some word accepted with probability above the threshold?
    Emptiness(EmptinessArgs),
    /// (1+ε)-approximation of the value of a k-ambiguous automaton.
    Value {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = rational_arg, value_name = "N/D")]
        epsilon: Rational,
        #[command(flatten)]
        cap: KCap,
    },
    /// Pareto curve of a multi-weighted DAG (`.spg`).
    Pareto(ParetoArgs),
    /// Reduce a k-ambiguous automaton to a k-weighted DAG.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(short, long, value_name = "OUT.spg")]
        output: Option<PathBuf>,
        /// Longest word simulated (default n^k).
        #[arg(long, value_name = "L")]
        length_bound: Option<u64>,
        #[command(flatten)]
        cap: KCap,
    },
    /// Write an instance as `.pa v1`.
    Generate {
        #[arg(short, long, global = true, value_name = "OUT.pa")]
        output: Option<PathBuf>,
        #[command(subcommand)]
        family: Family,
    },
    /// Shorten a witness word without lowering its probability.
    Shorten(ShortenArgs),
}

#[derive(Args, Debug)]
struct KCap {
    /// Allow the reduction for k up to this value.
    #[arg(long, value_name = "K")]
    allow_k: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    Exhaustive,
    Convex2,
    Exact,
}

#[derive(Args, Debug)]
struct EmptinessArgs {
    file: PathBuf,
    #[arg(long, value_parser = rational_arg, value_name = "N/D")]
    threshold: Rational,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
    /// Longest word searched by the exhaustive method.
    #[arg(long, value_name = "L")]
    max_len: Option<usize>,
    /// Degree of ambiguity for the exact method (default: smallest that holds).
    #[arg(long)]
    k: Option<usize>,
    #[command(flatten)]
    cap: KCap,
}

#[derive(Args, Debug)]
#[group(id = "algorithm", multiple = false)]
struct ParetoAlgorithm {
    /// Exact Pareto curve (default).
    #[arg(long)]
    exact: bool,
    /// ε-convex Pareto set.
    #[arg(long, value_parser = rational_arg, value_name = "N/D")]
    epsilon: Option<Rational>,
    /// Convex Pareto curve, k = 2 only.
    #[arg(long)]
    convex2: bool,
}

#[derive(Args, Debug)]
struct ParetoArgs {
    file: PathBuf,
    #[command(flatten)]
    algorithm: ParetoAlgorithm,
    #[arg(long, value_name = "OUT.csv")]
    csv: Option<PathBuf>,
    #[arg(long, value_name = "OUT.svg")]
    svg: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Family {
    /// The binary-expansion automaton over {0, 1}.
    Bin,
    /// The clique automaton of a graph.
    Clique {
        #[arg(long, value_name = "FILE.g")]
        graph: PathBuf,
    },
    /// The isolation instance of two homomorphisms into {0, 1}*.
    Isolation {
        #[arg(long, value_name = "SPEC")]
        phi1: String,
        #[arg(long, value_name = "SPEC")]
        phi2: String,
    },
    /// Uniform union of DFAs.
    DfaIntersect {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Seeded random k-ambiguous automaton.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct ShortenArgs {
    file: PathBuf,
    #[arg(long, value_name = "W")]
    word: String,
    #[command(flatten)]
    mode: ShortenMode,
}

#[derive(Args, Debug)]
#[group(id = "mode", required = true, multiple = false)]
struct ShortenMode {
    /// Shorten to n^k for a k-ambiguous automaton.
    #[arg(long)]
    k: Option<usize>,
    /// Shorten to (n+1)! for a finitely ambiguous automaton.
    #[arg(long)]
    finite: bool,
}

/// What a command produced before rendering.
pub(crate) struct Answer {
    pub report: report::Report,
    /// Raw text written to standard output as is (`reduce`, `generate`).
    pub raw: Option<String>,
    pub code: i32,
}

fn budget_from(flag: Option<u64>, env: Option<String>) -> CliResult<Budget> {
    if let Some(b) = flag {
        return Ok(Budget(b));
    }
    match env {
        Some(v) => {
            v.trim().parse().map(Budget).map_err(|_| {
                CliError::Usage(format!("{BUDGET_ENV} must be a non-negative integer, got `{v}`"))
            })
        }
        None => Ok(Budget::DEFAULT),
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandOutcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CommandOutcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let porcelain = cli.porcelain;
    let result = budget_from(cli.budget, std::env::var(BUDGET_ENV).ok())
        .and_then(|budget| commands::dispatch(cli.command, budget));
    match result {
        Ok(answer) => CommandOutcome {
            code: answer.code,
            stdout: answer.raw.unwrap_or_default() + &answer.report.render(porcelain),
            stderr: String::new(),
        },
        Err(e) => {
            let mut stderr = format!("error: {e}\n");
            if let Some(hint) = e.hint() {
                stderr.push_str(&format!("hint: {hint}\n"));
            }
            if let CliError::Usage(_) = e {
                stderr.push_str("usage: pba <COMMAND> [OPTIONS]; see `pba --help`\n");
            }
            CommandOutcome {
                code: e.code(),
                stdout: String::new(),
                stderr,
            }
        }
    }
}

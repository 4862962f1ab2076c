//! `ghzw`: command-line frontend for the GHZ-W-type classification engine.

mod commands;

use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use ghzw::oracle::{max_qubits, DEFAULT_TOLERANCE};
use ghzw::{CanonLimits, Error, ErrorClass, SymbolicState};

const EXIT_DOMAIN: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "ghzw",
    version,
    about = "Classify GHZ-W-type multiqubit states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    config: Config,
}

#[derive(Args, Debug, Clone)]
struct Config {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Seed for every randomized step.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    /// Relative singular-value tolerance for numeric ranks.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE, global = true)]
    tol: f64,

    /// Largest dense expansion, in qubits [default: GHZW_MAX_QUBITS or 14].
    #[arg(long, global = true)]
    max_qubits: Option<usize>,

    /// Largest number of groups (matrix columns) for canonical forms.
    #[arg(long, default_value_t = 10, global = true)]
    max_n: usize,

    /// Largest number of terms (matrix rows) for canonical forms.
    #[arg(long, default_value_t = 24, global = true)]
    max_t: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a state is fully entangled.
    Check { file: PathBuf },
    /// Merge groups until the state is in simplest form.
    Simplify { file: PathBuf },
    /// Canonical form of a pure GHZ-type or pure W-type state.
    #[command(group(ArgGroup::new("basis").required(true).args(["ghz", "w"])))]
    Canon {
        #[arg(long)]
        ghz: bool,
        #[arg(long)]
        w: bool,
        /// Allow groups of different sizes to be exchanged.
        #[arg(long)]
        ignore_sizes: bool,
        file: PathBuf,
    },
    /// List the ways `n` qubits split into groups.
    EnumPartitions {
        n: usize,
        #[arg(long, conflicts_with = "w_only")]
        ghz_only: bool,
        #[arg(long)]
        w_only: bool,
        #[arg(long)]
        multi_group: bool,
    },
    /// List the classes of `n` weight-`p` GHZ-type columns over `p + q` rows.
    EnumGhz {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        n: usize,
    },
    /// List the highest layers of `p` terms with `q` W factors on `n` groups.
    EnumW {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        p: usize,
    },
    /// Join a GHZ-type state and a W-type state term by term.
    Compose { ghz: PathBuf, w: PathBuf },
    /// Main-class label of a state in simplest form.
    Classify { file: PathBuf },
    /// Dense numeric cross-checks.
    Oracle {
        #[command(subcommand)]
        action: OracleAction,
    },
}

#[derive(Subcommand, Debug)]
enum OracleAction {
    /// Rank fingerprint, range classification and consistency checks.
    Verify { file: PathBuf },
}

/// Text and JSON renderings of one command's result. `ok` is false when a
/// cross-check failed; the report is still printed.
pub struct Report {
    pub text: String,
    pub json: serde_json::Value,
    pub ok: bool,
}

pub struct Settings {
    pub seed: u64,
    pub tol: f64,
    pub max_qubits: usize,
    pub limits: CanonLimits,
}

#[derive(Debug)]
pub enum Failure {
    Engine(Error),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

pub fn read_state(path: &PathBuf) -> Result<SymbolicState, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
    };
    let parsed = if text.trim_start().starts_with('{') {
        SymbolicState::from_json(&text)
    } else {
        SymbolicState::parse(&text)
    };
    parsed.map_err(|e| match e.class() {
        ErrorClass::Parse => Failure::Input(format!("{}: {e}", path.display())),
        _ => Failure::Engine(e),
    })
}

fn dispatch(command: Command, settings: &Settings) -> Result<Report, Failure> {
    match command {
        Command::Check { file } => commands::check(&read_state(&file)?),
        Command::Simplify { file } => commands::simplify(&read_state(&file)?),
        Command::Canon {
            ghz,
            ignore_sizes,
            file,
            ..
        } => commands::canon(&read_state(&file)?, ghz, !ignore_sizes, settings),
        Command::EnumPartitions {
            n,
            ghz_only,
            w_only,
            multi_group,
        } => commands::enum_partitions(
            n,
            ghzw::partitions::SkeletonFilter {
                ghz_only,
                w_only,
                multi_group,
            },
        ),
        Command::EnumGhz { p, q, n } => commands::enum_ghz(p, q, n, settings),
        Command::EnumW { n, q, p } => commands::enum_w(n, q, p, settings),
        Command::Compose { ghz, w } => commands::compose(&read_state(&ghz)?, &read_state(&w)?),
        Command::Classify { file } => commands::classify(&read_state(&file)?, settings),
        Command::Oracle {
            action: OracleAction::Verify { file },
        } => commands::verify(&read_state(&file)?, settings),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    if !(cli.config.tol > 0.0 && cli.config.tol < 1.0) {
        eprintln!("error: --tol must lie in (0, 1)");
        return ExitCode::from(EXIT_USAGE);
    }
    let settings = Settings {
        seed: cli.config.seed,
        tol: cli.config.tol,
        max_qubits: cli.config.max_qubits.unwrap_or_else(max_qubits),
        limits: CanonLimits {
            max_cols: cli.config.max_n,
            max_rows: cli.config.max_t,
            ..CanonLimits::default()
        },
    };
    match dispatch(cli.command, &settings) {
        Ok(report) => {
            let out = match cli.config.format {
                Format::Text => report.text,
                Format::Json => {
                    let mut s =
                        serde_json::to_string_pretty(&report.json).expect("report serializes");
                    s.push('\n');
                    s
                }
            };
            let mut stdout = io::stdout().lock();
            if stdout
                .write_all(out.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(EXIT_DOMAIN);
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: a cross-check failed");
                ExitCode::from(EXIT_DOMAIN)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_PARSE)
        }
        Err(Failure::Engine(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Parse => EXIT_PARSE,
                ErrorClass::Domain => EXIT_DOMAIN,
                ErrorClass::Resource => EXIT_RESOURCE,
            })
        }
    }
}

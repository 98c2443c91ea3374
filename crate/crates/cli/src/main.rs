use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ppl::cli::{run, BindingNames, Command, Format, Options, EXIT_OK, EXIT_USAGE};
use ppl::group::DEFAULT_ENUMERATION_BOUND;
use ppl::period::DEFAULT_NODE_BUDGET;

/// Environment variable capping period-enumeration work.
const NODE_BUDGET_VAR: &str = "PPL_NODE_BUDGET";

#[derive(Parser)]
#[command(
    name = "ppl",
    version,
    about = "Analyse n-periodic products of finite groups"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    format: OutputFormat,

    /// Evaluate criteria even when theorem hypotheses fail; such verdicts are labelled.
    #[arg(long, global = true)]
    lenient: bool,

    /// Largest factor order for normal-subgroup enumeration.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BOUND, global = true)]
    bound: usize,

    #[command(subcommand)]
    command: Sub,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Sub {
    /// Load and check a product description.
    Validate { spec: PathBuf },
    /// Simplicity, Hopfian and factorizability verdicts.
    Analyze { spec: PathBuf },
    /// Normal subgroups of each factor with inheritable-normality verdicts.
    NormalSubgroups {
        spec: PathBuf,
        #[arg(long)]
        factor: Option<String>,
    },
    /// Certified rank-1 periods up to a syllable length.
    Periods {
        spec: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_syllables: usize,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Classify one word against the rank-1 criterion.
    Classify {
        spec: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Check two-involution witnesses over conjugated involution pairs.
    #[command(name = "lemma1-scan")]
    Lemma1Scan {
        /// Product to scan; defaults to Z2*S3 and Z2*Z6.
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        max_conj: usize,
        /// Random pairs to draw; exhaustive when omitted.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Replay the proof words with their certification and congruences.
    ProofSuite {
        spec: PathBuf,
        #[command(flatten)]
        bindings: Bindings,
    },
}

/// Element names; all are chosen automatically when none is given.
#[derive(Args)]
struct Bindings {
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    a1: Option<String>,
    #[arg(long)]
    a2: Option<String>,
    #[arg(long)]
    g: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    b1: Option<String>,
    #[arg(long)]
    b2: Option<String>,
}

fn node_budget() -> Result<u64, String> {
    match std::env::var(NODE_BUDGET_VAR) {
        Err(_) => Ok(DEFAULT_NODE_BUDGET),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{NODE_BUDGET_VAR} must be a non-negative integer, got `{v}`")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                EXIT_USAGE as u8
            } else {
                EXIT_OK as u8
            });
        }
    };
    let node_budget = match node_budget() {
        Ok(b) => b,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let options = Options {
        format: match cli.format {
            OutputFormat::Text => Format::Text,
            OutputFormat::Json => Format::Json,
        },
        lenient: cli.lenient,
        bound: cli.bound,
        node_budget,
    };
    let command = match cli.command {
        Sub::Validate { spec } => Command::Validate { spec },
        Sub::Analyze { spec } => Command::Analyze { spec },
        Sub::NormalSubgroups { spec, factor } => Command::NormalSubgroups { spec, factor },
        Sub::Periods {
            spec,
            max_syllables,
            limit,
        } => Command::Periods {
            spec,
            max_syllables,
            limit,
        },
        Sub::Classify { spec, word } => Command::Classify { spec, word },
        Sub::Lemma1Scan {
            spec,
            max_conj,
            samples,
            seed,
        } => Command::Lemma1Scan {
            spec,
            max_conj,
            samples,
            seed,
        },
        Sub::ProofSuite { spec, bindings: b } => Command::ProofSuite {
            spec,
            bindings: BindingNames {
                a: b.a,
                a1: b.a1,
                a2: b.a2,
                g: b.g,
                b: b.b,
                b1: b.b1,
                b2: b.b2,
            },
        },
    };
    let outcome = run(&command, &options);
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}

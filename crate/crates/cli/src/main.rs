//! `qhl`: verify quasi-Hopf bundles, twist them, and compute link invariants
//! from their braid group representations.

macro_rules! with_bundle {
    ($e:expr, $b:ident => $body:expr) => {
        match $e {
            qhopf::io::AnyBundle::Rational($b) => $body,
            qhopf::io::AnyBundle::Laurent($b) => $body,
            qhopf::io::AnyBundle::Complex($b) => $body,
        }
    };
}

macro_rules! with_hopf_rep {
    ($e:expr, $b:ident => $body:expr) => {
        match $e {
            qhopf::io::AnyHopfRep::Rational($b) => $body,
            qhopf::io::AnyHopfRep::Laurent($b) => $body,
            qhopf::io::AnyHopfRep::Complex($b) => $body,
        }
    };
}

mod commands;
mod literal;
mod load;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "qhl", version, about = "Quasi-Hopf algebras, twists and link invariants")]
struct Cli {
    /// Tolerance for floating point comparisons.
    #[arg(long, global = true, env = "QHL_TOL", default_value_t = qhopf::DEFAULT_TOL)]
    tol: f64,
    /// Emit reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone)]
pub struct LoadArgs {
    /// Bundle file (quasi-Hopf or hopf-rep JSON).
    pub file: PathBuf,
    /// Skip the axiom checks normally run when a bundle is loaded.
    #[arg(long)]
    pub skip_verify: bool,
}

#[derive(Args, Debug, Clone)]
pub struct WordArgs {
    /// Braid word as signed generator indices, e.g. "1 -2 1".
    #[arg(long, allow_hyphen_values = true)]
    pub braid: Option<String>,
    /// Number of strands the word acts on.
    #[arg(long)]
    pub strands: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every axiom check on a bundle.
    Validate {
        #[command(flatten)]
        load: LoadArgs,
    },
    /// Twist a bundle by a twistor file and write the result.
    Twist {
        #[command(flatten)]
        load: LoadArgs,
        /// Twistor file.
        twistor: PathBuf,
        /// Output file (stdout when omitted).
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Markov trace and link polynomial of a braid closure.
    Invariant {
        #[command(flatten)]
        load: LoadArgs,
        #[arg(long)]
        rep: Option<String>,
        #[command(flatten)]
        word: WordArgs,
        /// Also report L(word) / L(unknot).
        #[arg(long)]
        normalized: bool,
    },
    /// Check the Markov properties and the trace identities on random words.
    MarkovCheck {
        #[command(flatten)]
        load: LoadArgs,
        #[arg(long)]
        rep: Option<String>,
        /// Number of random word pairs for trace cyclicity.
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest strand count used.
        #[arg(long, default_value_t = 4)]
        strands: usize,
    },
    /// Check the braid relations of the represented generators.
    BraidCheck {
        #[command(flatten)]
        load: LoadArgs,
        #[arg(long)]
        rep: Option<String>,
        #[arg(long, default_value_t = 4)]
        strands: usize,
    },
    /// Compare Markov traces before and after twisting.
    TwistInvariance {
        #[command(flatten)]
        load: LoadArgs,
        /// Twistor file; random twistors are used when omitted.
        twistor: Option<PathBuf>,
        #[arg(long)]
        rep: Option<String>,
        #[command(flatten)]
        word: WordArgs,
        /// Number of random twistors (without a twistor file).
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Random words per twistor when no --braid is given.
        #[arg(long, default_value_t = 10)]
        words: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also run the check with α left untwisted, which must fail.
        #[arg(long)]
        negative_control: bool,
    },
    /// Kauffman bracket and Jones polynomial by state enumeration.
    Oracle {
        #[command(flatten)]
        word: WordArgs,
        /// Value of A to substitute, e.g. "0.3+0.9i" or "[0.3, 0.9]".
        #[arg(long, allow_hyphen_values = true)]
        substitute: Option<String>,
    },
}

/// Exit 1: an identity failed. Exit 2: the input could not be read.
#[derive(Debug)]
pub enum CliError {
    Failed(String),
    Input(String),
}

impl From<qhopf::Error> for CliError {
    fn from(e: qhopf::Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub struct Ctx {
    pub tol: f64,
    pub json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        tol: cli.tol,
        json: cli.json,
    };
    let result = match cli.cmd {
        Command::Validate { load } => commands::validate(&ctx, &load),
        Command::Twist { load, twistor, output } => commands::twist(&ctx, &load, &twistor, output.as_deref()),
        Command::Invariant {
            load,
            rep,
            word,
            normalized,
        } => commands::invariant(&ctx, &load, rep.as_deref(), &word, normalized),
        Command::MarkovCheck {
            load,
            rep,
            trials,
            seed,
            strands,
        } => commands::markov_check(&ctx, &load, rep.as_deref(), trials, seed, strands),
        Command::BraidCheck { load, rep, strands } => commands::braid_check(&ctx, &load, rep.as_deref(), strands),
        Command::TwistInvariance {
            load,
            twistor,
            rep,
            word,
            trials,
            words,
            seed,
            negative_control,
        } => {
            let opts = commands::InvarianceOpts {
                trials,
                words,
                seed,
                negative_control,
            };
            commands::twist_invariance(&ctx, &load, twistor.as_deref(), rep.as_deref(), &word, &opts)
        }
        Command::Oracle { word, substitute } => commands::oracle(&word, substitute.as_deref()),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

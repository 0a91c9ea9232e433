mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cobweave_core::budget::Budget;

use crate::io::{Outcome, Report};

/// Boolean TQFTs of automata, transducers and grammars.
#[derive(Parser, Debug)]
#[command(name = "cobweave", version, about)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Write the JSON-lines report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Word and path length bound for enumerations.
    #[arg(long, global = true, default_value_t = 8)]
    pub bound: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Does the machine accept a word?
    Accept {
        machine: PathBuf,
        #[arg(long, default_value = "")]
        word: String,
    },
    /// Evaluate a cobordism term under the machine's functor.
    Eval { machine: PathBuf, diagram: PathBuf },
    /// Apply a transducer to a machine.
    Apply { transducer: PathBuf, machine: PathBuf },
    /// Compose two transducers, `second ∘ first`.
    Compose { second: PathBuf, first: PathBuf },
    /// Check the naturality squares of a transducer on generator probes.
    CheckNaturality {
        transducer: PathBuf,
        machine: PathBuf,
        /// Also compare the span squares.
        #[arg(long)]
        spans: bool,
    },
    /// Local-language analysis of a machine.
    Subregular {
        #[command(subcommand)]
        action: SubregularAction,
    },
    /// Categorical automata and transducers.
    Cat {
        #[command(subcommand)]
        action: CatAction,
    },
    /// Context-free grammars over free categories.
    Grammar {
        #[command(subcommand)]
        action: GrammarAction,
    },
    /// Factor a grammar through tree contours and a transducer.
    CsFactorize {
        grammar: PathBuf,
        /// Tree depth for the triangle checks.
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Run the acceptance suite.
    Suite {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Run a single criterion.
        #[arg(long)]
        criterion: Option<u8>,
        /// Run every check on the calling thread.
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum SubregularAction {
    /// Factors, strict locality, nilpotent pairs and cohomology.
    Analyze {
        machine: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        markers: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum CatAction {
    /// Check that the structure functor is finitary and ULF.
    Check { machine: PathBuf },
    /// Arrow language up to `--bound` generators.
    Language { machine: PathBuf },
    /// The operator of a base path, given as generator labels.
    Tphi {
        machine: PathBuf,
        #[arg(long, default_value = "")]
        word: String,
    },
    /// Apply a categorical transducer.
    Apply { transducer: PathBuf, machine: PathBuf },
    /// Naturality squares on generator probes.
    Naturality { transducer: PathBuf, machine: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum GrammarAction {
    /// Constants of the start colour up to `--bound` generators.
    Language { grammar: PathBuf },
    /// The spliced sequence a tree evaluates to.
    Apply { grammar: PathBuf, tree: PathBuf },
    /// The operator of a spliced sequence on the grammar's state space.
    Operator { grammar: PathBuf, sequence: PathBuf },
    /// Naturality squares for a chromatic grammar.
    Naturality { transducer: PathBuf, grammar: PathBuf },
}

fn budget() -> Outcome<Budget> {
    match std::env::var("COBWEAVE_BUDGET") {
        Ok(spec) => Ok(Budget::default().parse_override(&spec)?),
        Err(_) => Ok(Budget::default()),
    }
}

fn run(cli: Cli) -> Outcome<usize> {
    let budget = budget()?;
    let mut report = Report::open(cli.common.out.as_ref())?;
    let ctx = commands::Ctx {
        common: &cli.common,
        budget,
    };
    match cli.command {
        Command::Accept { machine, word } => commands::accept(&ctx, &mut report, &machine, &word)?,
        Command::Eval { machine, diagram } => commands::eval(&ctx, &mut report, &machine, &diagram)?,
        Command::Apply { transducer, machine } => commands::apply(&ctx, &mut report, &transducer, &machine)?,
        Command::Compose { second, first } => commands::compose(&ctx, &mut report, &second, &first)?,
        Command::CheckNaturality { transducer, machine, spans } => commands::naturality(&ctx, &mut report, &transducer, &machine, spans)?,
        Command::Subregular { action } => commands::subregular(&ctx, &mut report, action)?,
        Command::Cat { action } => commands::cat(&ctx, &mut report, action)?,
        Command::Grammar { action } => commands::grammar(&ctx, &mut report, action)?,
        Command::CsFactorize { grammar, depth } => commands::cs_factorize(&ctx, &mut report, &grammar, depth)?,
        Command::Suite { seed, criterion, sequential } => commands::suite(&ctx, &mut report, seed, criterion, sequential)?,
    }
    report.finish()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(n) => {
            eprintln!("{n} check(s) failed");
            ExitCode::from(1)
        }
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}


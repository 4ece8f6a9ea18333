//! `stacklab`: finite groupoids and graphs of groups from the command line.
//! Exit status 0 means success or a positive answer, 1 a negative answer,
//! 2 an error.

mod commands;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use stacklab::selftest::DEFAULT_SEED;

#[derive(Parser)]
#[command(
    name = "stacklab",
    version,
    about = "Finite groupoids and graphs of groups with their covers"
)]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy, Debug)]
pub struct Options {
    /// Seed for every randomized check
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Emit a canonical JSON document
    #[arg(long, global = true, conflicts_with = "dot")]
    pub json: bool,
    /// Emit Graphviz DOT
    #[arg(long, global = true)]
    pub dot: bool,
    /// Suppress diagnostics on stderr
    #[arg(long, short, global = true)]
    pub quiet: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate any document
    Validate { file: PathBuf },
    /// One object per component
    Skeleton { groupoid: PathBuf },
    /// Decide Morita equivalence of two groupoids (exit 1 if inequivalent)
    MoritaCheck { left: PathBuf, right: PathBuf },
    /// 2-fiber product of two functors with a common codomain
    FiberProduct { left: PathBuf, right: PathBuf },
    /// Inertia groupoid of a groupoid, or of BG for a group
    Inertia { input: PathBuf },
    /// Double cosets H\G/K for two homomorphisms into G
    DoubleCosets { left: PathBuf, right: PathBuf },
    /// Presentation of the fundamental group of a graph of groups
    Pi1 {
        gog: PathBuf,
        /// Basepoint vertex name (default: the graph's basepoint)
        #[arg(long)]
        basepoint: Option<String>,
    },
    /// Normal form of a word in the fundamental group
    Reduce {
        gog: PathBuf,
        word: String,
        /// Read WORD as a path such as `v:1 e+ w:2 e-` instead of a word in the generators
        #[arg(long)]
        path: bool,
    },
    /// Ball in the Bass-Serre tree around the basepoint vertex
    Ball {
        gog: PathBuf,
        #[arg(long, default_value_t = 2)]
        radius: usize,
    },
    /// Inertia graph of groups
    InertiaGog { gog: PathBuf },
    /// Injectivity certificate and a search for a cover with trivial vertex groups
    Uniformize {
        gog: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
    },
    /// Cover of a graph of groups determined by an action of its fundamental group
    Cover { gog: PathBuf, action: PathBuf },
    /// Action of the fundamental group on the fiber of a stored cover
    Monodromy { cover: PathBuf },
    /// Transitive actions up to conjugacy
    Enumerate {
        gog: PathBuf,
        #[arg(long, default_value_t = 3)]
        degree: usize,
    },
    /// DOT for a groupoid, graph of groups or cover
    ExportDot { file: PathBuf },
    /// Run every oracle suite
    Selftest {
        /// Check fiber products on a spread sample of functors instead of every pair
        #[arg(long)]
        quick: bool,
    },
}

/// What a command produced; `verdict` false maps to exit status 1.
pub struct Output {
    pub stdout: String,
    pub notes: Vec<String>,
    pub verdict: bool,
}

impl Output {
    pub fn new(stdout: String) -> Self {
        Output {
            stdout,
            notes: Vec::new(),
            verdict: true,
        }
    }

    pub fn verdict(mut self, v: bool) -> Self {
        self.verdict = v;
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match commands::run(&cli.command, &cli.opts) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            let _ = stdout.flush();
            if !cli.opts.quiet {
                for n in &out.notes {
                    eprintln!("{n}");
                }
            }
            ExitCode::from(if out.verdict { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use leechforms::error::{Error, Result};
use leechforms::lattice::IntLattice;
use leechforms::params::{lfunction_json, ParamContext};
use leechforms::verify::{named_lattice, summarize, Level, Options, Runner};

#[derive(Parser)]
#[command(name = "leechforms", version, about = "Exact checks around the Leech lattice, M24 and invariant alternating forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite: golay, m24, invariants, leech, roots,
    /// qlattices, fourier, params or all.
    Verify {
        suite: String,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
        /// Directory for cached M24 generators.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        /// Worker threads; defaults to the number of logical cores.
        #[arg(long)]
        jobs: Option<usize>,
        /// Node budget for backtracking searches.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// fast, full or stretch.
        #[arg(long, default_value = "full")]
        level: Level,
    },
    /// Print data as JSON.
    Emit {
        #[command(subcommand)]
        what: EmitCommand,
    },
    /// Export or inspect lattices as JSON (basis and Gram matrix).
    Lattice {
        #[command(subcommand)]
        action: LatticeCommand,
    },
}

#[derive(Subcommand)]
enum EmitCommand {
    /// Euler factors of the standard parameters ψ_g and ψ'_g at a prime.
    Lfunctions {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        p: u64,
    },
}

#[derive(Subcommand)]
enum LatticeCommand {
    /// Write a named lattice: leech, q6, q8, q12, q16, fix:<shape>,
    /// fixperp:<shape>, or a root system type such as 2A4 or E8.
    Export {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Read a lattice file and print its invariants.
    Import { file: PathBuf },
}

fn default_cache() -> Option<PathBuf> {
    dirs::cache_dir().map(|d| d.join("leechforms"))
}

/// Writes to stdout; a closed pipe ends output quietly.
fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}").and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Verify { suite, json, cache_dir, jobs, budget, seed, level } => {
            if let Some(n) = jobs {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n.max(1))
                    .build_global()
                    .map_err(|e| Error::Invalid(e.to_string()))?;
            }
            let mut opts = Options { seed, cache_dir: cache_dir.or_else(default_cache), level, ..Options::default() };
            if let Some(b) = budget {
                opts.budget = b;
            }
            let report = Runner::new(opts).run(&suite)?;
            if json {
                emit(&serde_json::to_string_pretty(&report)?)?;
            } else {
                emit(report.to_text().trim_end())?;
            }
            Ok(report.pass)
        }
        Command::Emit { what: EmitCommand::Lfunctions { g, p } } => {
            let ctx = ParamContext::new(p.max(2))?;
            emit(&serde_json::to_string_pretty(&lfunction_json(&ctx, g, p)?)?)?;
            Ok(true)
        }
        Command::Lattice { action: LatticeCommand::Export { name, out, cache_dir } } => {
            let runner = Runner::new(Options { cache_dir: cache_dir.or_else(default_cache), ..Options::default() });
            let l = named_lattice(&runner, &name)?;
            let text = serde_json::to_string_pretty(&l)?;
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => emit(&text)?,
            }
            Ok(true)
        }
        Command::Lattice { action: LatticeCommand::Import { file } } => {
            let l: IntLattice = serde_json::from_str(&std::fs::read_to_string(file)?)?;
            let l = IntLattice::from_basis(l.basis, l.scale_sq)?;
            emit(&serde_json::to_string_pretty(&summarize(&l)?)?)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

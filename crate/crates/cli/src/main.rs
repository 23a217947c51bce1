use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use prdm_cli::experiments::{self, RunError};
use prdm_cli::output::{summary_json, write_csv};

#[derive(Parser)]
#[command(
    name = "prdm",
    version,
    about = "Numerical experiments on pseudorandom density matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML experiment file; defaults are used when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the seed from the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// CSV destination; the summary goes next to it with a .json extension.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for the parallel samplers.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Exact t-copy distance between GHSE and maximally mixed moments.
    GhseMoments,
    /// Coherence, entanglement, and magic of GHSE and PRDM samples.
    Resources,
    /// Purity-attack advantage under local or global depolarizing noise.
    NoiseRobustness,
    /// Statistical gap of key averages and the noise budget.
    Efi,
    /// Banknote completeness and attacks.
    Money,
    /// Memoryless single-copy learners.
    Memoryless,
    /// Fast invariant suite.
    Selftest,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::GhseMoments => "ghse-moments",
            Command::Resources => "resources",
            Command::NoiseRobustness => "noise-robustness",
            Command::Efi => "efi",
            Command::Money => "money",
            Command::Memoryless => "memoryless",
            Command::Selftest => "selftest",
        }
    }
}

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_ASSUMPTION: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot configure {t} threads: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    }
    let name = cli.command.name();
    let (seed, configured_out, out) = match experiments::run(name, cli.config.as_deref(), cli.seed) {
        Ok(r) => r,
        Err(RunError::Config(e)) => {
            eprintln!("config error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAILURE);
        }
    };
    let summary = summary_json(name, seed, &out);
    let written = match cli.out.or(configured_out) {
        Some(path) => File::create(&path)
            .map_err(|e| e.to_string())
            .and_then(|f| write_csv(&out.rows, BufWriter::new(f)).map_err(|e| e.to_string()))
            .and_then(|_| std::fs::write(path.with_extension("json"), &summary).map_err(|e| e.to_string())),
        None => write_csv(&out.rows, io::stdout().lock())
            .map_err(|e| e.to_string())
            .and_then(|_| writeln!(io::stderr(), "{summary}").map_err(|e| e.to_string())),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write results: {e}");
        return ExitCode::from(EXIT_FAILURE);
    }
    for c in out.checks.iter().filter(|c| !c.passed) {
        eprintln!("check failed: {} ({})", c.name, c.detail);
    }
    if out.assumption_violated {
        eprintln!("assumption violated: the verifier threshold exceeds the minimum note fidelity plus margin");
        return ExitCode::from(EXIT_ASSUMPTION);
    }
    if name == "selftest" && !out.all_passed() {
        return ExitCode::from(EXIT_FAILURE);
    }
    ExitCode::SUCCESS
}

//! `leafdist`: exact leaf-distance statistics for uniform unrooted binary
//! phylogenetic trees.

mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::CommandError;
use output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "leafdist",
    version,
    about = "Distance between two leaves in a uniform fully resolved unrooted phylogenetic tree"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write results here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for the ChaCha8 sampler.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact distribution c_1..c_{n-1} with probabilities.
    Dist { n: u64 },
    /// Exact median, optionally with its asymptotic approximations.
    Median {
        n: u64,
        #[arg(long)]
        asymptotics: bool,
    },
    /// Exact p-percentile for a rational p = num/den, with its asymptote.
    Percentile { n: u64, p: String },
    /// Exact mean and variance, compared with sqrt(pi n).
    Stats { n: u64 },
    /// Cross-check every closed form against its independent route.
    Verify {
        #[arg(long, default_value_t = 9)]
        max_n_enum: usize,
        #[arg(long, default_value_t = 200)]
        max_n_formula: u64,
        #[arg(long, default_value_t = 100)]
        max_n_series: u64,
        /// Replace c_i with a deliberately wrong formula (negative control).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Monte Carlo histogram of d(1,2) and its sup-distance to the exact CDF.
    Sample {
        n: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        /// Write every sampled tree, one Newick string per line.
        #[arg(long)]
        emit_newick: Option<PathBuf>,
    },
    /// Convergence table of exact median (or percentile) against asymptotes.
    Asympt {
        /// Comma-separated list of n.
        #[arg(value_delimiter = ',', required_unless_present = "decades")]
        n_list: Vec<u64>,
        /// Decades LO:HI, i.e. n = 10^LO, ..., 10^HI.
        #[arg(long, conflicts_with = "n_list")]
        decades: Option<String>,
        /// Rational p = num/den; percentile columns replace median columns.
        #[arg(long)]
        p: Option<String>,
    },
}

fn run(cli: Cli) -> Result<(), CommandError> {
    let table = match cli.command {
        Command::Dist { n } => commands::dist(n)?,
        Command::Median { n, asymptotics } => commands::median(n, asymptotics)?,
        Command::Percentile { n, p } => commands::percentile(n, &p)?,
        Command::Stats { n } => commands::stats(n)?,
        Command::Verify {
            max_n_enum,
            max_n_formula,
            max_n_series,
            inject_fault,
        } => commands::verify(max_n_enum, max_n_formula, max_n_series, inject_fault)?,
        Command::Sample {
            n,
            samples,
            emit_newick,
        } => commands::sample(n, samples, cli.seed, emit_newick.as_deref())?,
        Command::Asympt { n_list, decades, p } => {
            commands::asympt(n_list, decades.as_deref(), p.as_deref())?
        }
    };
    let (table, verification_failure) = table.into_parts();
    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| CommandError::Io(e.into()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    table
        .write(cli.format, &mut out)
        .map_err(CommandError::Io)?;
    out.flush().map_err(|e| CommandError::Io(e.into()))?;
    match verification_failure {
        Some(msg) => Err(CommandError::Verification(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("leafdist: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

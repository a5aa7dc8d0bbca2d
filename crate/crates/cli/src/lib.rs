//! `qpms`: solve, generate, benchmark and score planted motif instances.

mod bench;
mod report;
mod score;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use qpms_core::datagen::{
    generate_fm_with, parse_ground_truth, write_fasta, write_ground_truth, FmParams,
};
use qpms_core::model::{parse_fasta, validate_instance, Alphabet, Instance};
use qpms_core::schedule::schedule;
use qpms_core::{Algorithm, Error, SolverOptions};

pub use report::{MotifEntry, RunReport};

/// Exit status for invalid parameters or unreadable input.
pub const EXIT_BAD_INPUT: i32 = 2;
/// Exit status when an enumeration budget is exceeded.
pub const EXIT_BUDGET: i32 = 3;
/// Exit status when `--timeout` expires.
pub const EXIT_TIMEOUT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "qpms", version, about = "Exact quorum planted motif search")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find every (l, d, q)-motif of a FASTA file.
    Solve(SolveArgs),
    /// Write a planted instance and its ground truth.
    Generate(GenerateArgs),
    /// Time solvers on the challenging planted instances.
    Bench(bench::BenchArgs),
    /// Alignment, profile, consensus and score for chosen start positions.
    Score(score::ScoreArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlphabetArg {
    Dna,
    Protein,
}

impl AlphabetArg {
    pub fn alphabet(self) -> Alphabet {
        match self {
            AlphabetArg::Dna => Alphabet::dna(),
            AlphabetArg::Protein => Alphabet::protein(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Oracle,
    Prune,
    Qpms7,
    Traver,
    Sigma,
    Subset,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Algorithm {
        match a {
            AlgoArg::Oracle => Algorithm::Oracle,
            AlgoArg::Prune => Algorithm::Prune,
            AlgoArg::Qpms7 => Algorithm::Qpms7,
            AlgoArg::Traver => Algorithm::Traver,
            AlgoArg::Sigma => Algorithm::Sigma,
            AlgoArg::Subset => Algorithm::Subset,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub fasta: PathBuf,
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub q: usize,
    #[arg(long, value_enum, default_value = "sigma")]
    pub algo: AlgoArg,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Root windows per work unit; 1 gives one unit per window.
    #[arg(long, default_value_t = qpms_core::schedule::DEFAULT_CHUNK)]
    pub chunk: usize,
    #[arg(long)]
    pub no_string_reorder: bool,
    #[arg(long)]
    pub no_pos_reorder: bool,
    /// Ground-truth sidecar; adds a recovery flag to the report.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
    #[arg(long, value_enum, default_value = "dna")]
    pub alphabet: AlphabetArg,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
    /// Subset size for `--algo subset`.
    #[arg(long)]
    pub subset_k: Option<usize>,
    /// Omit the motif list from the JSON report above this many motifs.
    #[arg(long, default_value_t = 10_000)]
    pub max_listed: usize,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    #[arg(long, default_value_t = 600)]
    pub m: usize,
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 20)]
    pub q: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Writes PREFIX.fasta and PREFIX.truth.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "dna")]
    pub alphabet: AlphabetArg,
    /// Plant into q random sequences instead of the first q.
    #[arg(long)]
    pub random_targets: bool,
}

/// Runs the command line and returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(&a),
        Command::Generate(a) => cmd_generate(&a),
        Command::Bench(a) => bench::cmd_bench(&a),
        Command::Score(a) => score::cmd_score(&a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}

/// Maps an error to the documented exit status.
pub fn exit_code(e: &anyhow::Error) -> i32 {
    match e.downcast_ref::<Error>() {
        Some(Error::BudgetExceeded { .. } | Error::Overflow) => EXIT_BUDGET,
        Some(Error::TimedOut) => EXIT_TIMEOUT,
        Some(_) => EXIT_BAD_INPUT,
        None if e.downcast_ref::<std::io::Error>().is_some() => EXIT_BAD_INPUT,
        None => 1,
    }
}

pub(crate) fn read_instance(
    path: &Path,
    alphabet: Alphabet,
    l: usize,
    d: usize,
    q: usize,
) -> anyhow::Result<Instance> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let seqs = parse_fasta(&bytes, &alphabet)?;
    Ok(validate_instance(alphabet, seqs, l, d, q)?)
}

fn cmd_solve(a: &SolveArgs) -> anyhow::Result<()> {
    let alphabet = a.alphabet.alphabet();
    let inst = read_instance(&a.fasta, alphabet.clone(), a.l, a.d, a.q)?;
    let truth = match &a.truth {
        Some(path) => {
            let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            Some(parse_ground_truth(&bytes, &alphabet)?)
        }
        None => None,
    };

    let mut opts = SolverOptions::new(a.algo.into()).threads(a.threads);
    opts.chunk = a.chunk.max(1);
    opts.string_reordering = !a.no_string_reorder;
    opts.position_reordering = !a.no_pos_reorder;
    opts.subset_size = a.subset_k;
    if let Some(secs) = a.timeout {
        opts = opts.timeout(Duration::from_secs_f64(secs.max(0.0)));
    }
    let solution = schedule(&inst, &opts)?;
    let recovered = truth.as_ref().map(|t| solution.motifs.contains(&t.motif));

    if a.json {
        let report = RunReport::new(&inst, &opts, &solution, recovered, a.max_listed);
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", solution.motifs.render(&alphabet));
        if let Some(r) = recovered {
            eprintln!("planted motif recovered: {r}");
        }
    }
    Ok(())
}

fn cmd_generate(a: &GenerateArgs) -> anyhow::Result<()> {
    let params = FmParams {
        n: a.n,
        m: a.m,
        l: a.l,
        d: a.d,
        q: a.q,
        random_targets: a.random_targets,
    };
    let planted = generate_fm_with(params, a.alphabet.alphabet(), a.seed)?;
    let fasta = with_suffix(&a.out, "fasta");
    let truth = with_suffix(&a.out, "truth");
    fs::write(
        &fasta,
        write_fasta(planted.instance.sequences(), planted.instance.alphabet()),
    )
    .with_context(|| format!("writing {}", fasta.display()))?;
    fs::write(&truth, write_ground_truth(&planted))
        .with_context(|| format!("writing {}", truth.display()))?;
    Ok(())
}

fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

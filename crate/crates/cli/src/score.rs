use std::fs;
use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use qpms_core::consensus::{
    alignment_matrix, best_starts, consensus_score, consensus_string, profile_matrix, StartVector,
};
use qpms_core::model::parse_fasta;
use qpms_core::Error;

use crate::AlphabetArg;

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[arg(long)]
    pub fasta: PathBuf,
    #[arg(long)]
    pub l: usize,
    /// Comma-separated 1-based start positions, one per sequence. Without
    /// it the best start vector is searched exhaustively.
    #[arg(long)]
    pub starts: Option<String>,
    #[arg(long, value_enum, default_value = "dna")]
    pub alphabet: AlphabetArg,
    /// Upper bound on the number of start vectors tried.
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
}

pub(crate) fn cmd_score(a: &ScoreArgs) -> anyhow::Result<()> {
    let alphabet = a.alphabet.alphabet();
    let bytes = fs::read(&a.fasta).with_context(|| format!("reading {}", a.fasta.display()))?;
    let seqs = parse_fasta(&bytes, &alphabet)?;
    let starts = match &a.starts {
        Some(csv) => {
            let parsed = csv
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Error::BadParams(format!("bad --starts {csv:?}: {e}")))?;
            StartVector::new(parsed)
        }
        None => best_starts(&seqs, a.l, alphabet.size(), a.budget)?.0,
    };
    let alignment = alignment_matrix(&seqs, &starts, a.l)?;
    let profile = profile_matrix(&alignment, alphabet.size())?;

    let list: Vec<String> = starts.as_slice().iter().map(usize::to_string).collect();
    println!("starts\t{}", list.join(","));
    println!("alignment");
    for row in &alignment {
        println!("{}", alphabet.decode(row));
    }
    println!("profile");
    print!("{}", profile.render(&alphabet));
    println!(
        "consensus\t{}",
        consensus_string(&profile).to_string(&alphabet)
    );
    println!("score\t{}", consensus_score(&profile));
    Ok(())
}

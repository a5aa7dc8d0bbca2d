//! Exact (l, d, q)-motif solvers.
//!
//! Every solver ends in the same place: each candidate that passes its
//! traversal-time quorum bookkeeping is checked against all n sequences by
//! [`verify_motif`] before it is emitted, and results are deduplicated into a
//! canonical [`MotifSet`]. The solvers differ only in how many candidates
//! they look at.

pub(crate) mod oracle;
pub(crate) mod pair;
pub(crate) mod prune;
pub(crate) mod subset;
mod window_set;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::model::{Instance, Lmer, MotifSet};
use crate::schedule::{schedule, DEFAULT_CHUNK};

pub use subset::default_subset_size;
pub use window_set::{filter_windows, WindowSet};

/// Default cap on σ^l for the exhaustive oracle.
pub const DEFAULT_ORACLE_BUDGET: u64 = 65_536;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Check every l-mer of Σ^l.
    Oracle,
    /// Single-root neighborhood trees with quorum pruning.
    Prune,
    /// Root/reference pairs with three-ball feasibility pruning.
    Qpms7,
    /// Pair search with prefix-fixed feasibility, combination elimination
    /// and string/position reordering.
    Traver,
    /// `Traver` computing every distance on bit-plane packed l-mers.
    Sigma,
    /// Solve a prefix subset of the sequences, then verify against all.
    Subset,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Oracle,
        Algorithm::Prune,
        Algorithm::Qpms7,
        Algorithm::Traver,
        Algorithm::Sigma,
        Algorithm::Subset,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Oracle => "oracle",
            Algorithm::Prune => "prune",
            Algorithm::Qpms7 => "qpms7",
            Algorithm::Traver => "traver",
            Algorithm::Sigma => "sigma",
            Algorithm::Subset => "subset",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::BadParams(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct SolverOptions {
    pub algorithm: Algorithm,
    /// Draw the reference from the sequence farthest from the root l-mer.
    pub string_reordering: bool,
    /// Traverse positions where root and reference differ first.
    pub position_reordering: bool,
    /// Route pair-search distances through packed l-mers. Always on for
    /// `Sigma`.
    pub use_compressed: bool,
    /// The quorum prune of `Prune` (switching it off only costs time).
    pub quorum_pruning: bool,
    pub threads: usize,
    /// Root windows per work unit.
    pub chunk: usize,
    pub oracle_budget: u64,
    /// Subset size for `Subset`; `None` picks a default.
    pub subset_size: Option<usize>,
    /// Base solver for `Subset`.
    pub subset_base: Algorithm,
    pub deadline: Option<Instant>,
}

impl SolverOptions {
    pub fn new(algorithm: Algorithm) -> Self {
        SolverOptions {
            algorithm,
            string_reordering: true,
            position_reordering: true,
            use_compressed: algorithm == Algorithm::Sigma,
            quorum_pruning: true,
            threads: 1,
            chunk: DEFAULT_CHUNK,
            oracle_budget: DEFAULT_ORACLE_BUDGET,
            subset_size: None,
            subset_base: Algorithm::Sigma,
            deadline: None,
        }
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    pub fn timeout(mut self, timeout: Duration) -> Self {
        self.deadline = Some(Instant::now() + timeout);
        self
    }

    pub(crate) fn compressed(&self) -> bool {
        self.algorithm == Algorithm::Sigma || self.use_compressed
    }
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions::new(Algorithm::Sigma)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Search-tree nodes whose per-sequence bookkeeping was computed.
    pub visited_nodes: u64,
    /// Candidates checked against every sequence.
    pub verified_candidates: u64,
    pub work_units: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub motifs: MotifSet,
    pub stats: SolveStats,
}

/// Number of sequences holding an occurrence of `cand` within distance d,
/// and whether that reaches the quorum.
pub fn verify_motif(inst: &Instance, cand: &Lmer) -> Result<(bool, usize)> {
    if cand.len() != inst.l() {
        return Err(Error::LengthMismatch {
            left: cand.len(),
            right: inst.l(),
        });
    }
    let support = support_plain(inst, cand.codes());
    Ok((support >= inst.q(), support))
}

pub(crate) fn support_plain(inst: &Instance, cand: &[u8]) -> usize {
    let d = inst.d();
    inst.sequences()
        .iter()
        .filter(|s| s.codes().windows(cand.len()).any(|w| within(cand, w, d)))
        .count()
}

#[inline]
pub(crate) fn within(a: &[u8], b: &[u8], d: usize) -> bool {
    let mut miss = 0;
    for (x, y) in a.iter().zip(b) {
        if x != y {
            miss += 1;
            if miss > d {
                return false;
            }
        }
    }
    true
}

fn solve_with(inst: &Instance, opts: &SolverOptions, algorithm: Algorithm) -> Result<Solution> {
    let mut opts = opts.clone();
    opts.algorithm = algorithm;
    if algorithm == Algorithm::Sigma {
        opts.use_compressed = true;
    }
    schedule(inst, &opts)
}

pub fn solve_oracle(inst: &Instance, opts: &SolverOptions) -> Result<Solution> {
    solve_with(inst, opts, Algorithm::Oracle)
}

pub fn solve_qpmsprune(inst: &Instance, opts: &SolverOptions) -> Result<Solution> {
    solve_with(inst, opts, Algorithm::Prune)
}

pub fn solve_qpms7(inst: &Instance, opts: &SolverOptions) -> Result<Solution> {
    solve_with(inst, opts, Algorithm::Qpms7)
}

pub fn solve_traver(inst: &Instance, opts: &SolverOptions) -> Result<Solution> {
    let mut opts = opts.clone();
    opts.use_compressed = false;
    solve_with(inst, &opts, Algorithm::Traver)
}

pub fn solve_sigma(inst: &Instance, opts: &SolverOptions) -> Result<Solution> {
    solve_with(inst, opts, Algorithm::Sigma)
}

/// Solves the first `k` sequences with quorum q − (n − k) using
/// `opts.subset_base`, then keeps the candidates that are motifs of the
/// whole instance. `k` is raised to n − q + 1 if smaller.
pub fn solve_subset_then_verify(
    inst: &Instance,
    k: usize,
    opts: &SolverOptions,
) -> Result<Solution> {
    let mut opts = opts.clone();
    opts.subset_size = Some(k);
    solve_with(inst, &opts, Algorithm::Subset)
}

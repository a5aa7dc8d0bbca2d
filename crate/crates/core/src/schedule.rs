//! Deterministic parallel execution of window-rooted searches.
//!
//! A search is split into one subproblem per (root sequence, root window).
//! Consecutive windows are grouped into work units that worker threads pull
//! from a shared counter; there is no separate scheduling thread. Partial
//! results are merged by set union and canonical sort, so the output does
//! not depend on the thread count or on which worker ran which unit.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::model::{Instance, Lmer, MotifSet};
use crate::solvers::{self, Algorithm, Solution, SolveStats, SolverOptions};

pub const DEFAULT_CHUNK: usize = 8;

/// A run of consecutive root windows of one root sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorkUnit {
    pub string: usize,
    pub first_window: usize,
    pub end_window: usize,
}

pub fn work_units(root_strings: usize, windows: usize, chunk: usize) -> Vec<WorkUnit> {
    let chunk = chunk.max(1);
    let mut units = Vec::new();
    for string in 0..root_strings {
        let mut w = 0;
        while w < windows {
            let end = (w + chunk).min(windows);
            units.push(WorkUnit {
                string,
                first_window: w,
                end_window: end,
            });
            w = end;
        }
    }
    units
}

/// Worker-local collector for motifs and traversal counters.
#[derive(Debug)]
pub(crate) struct Sink {
    found: HashMap<Vec<u8>, usize>,
    pub(crate) visited: u64,
    pub(crate) verified: u64,
    deadline: Option<Instant>,
    expired: bool,
}

const DEADLINE_CHECK_EVERY: u64 = 1024;

impl Sink {
    pub(crate) fn new(deadline: Option<Instant>) -> Self {
        Sink {
            found: HashMap::new(),
            visited: 0,
            verified: 0,
            deadline,
            expired: false,
        }
    }

    /// Counts a visited node. Returns `false` once the deadline has passed.
    #[inline]
    pub(crate) fn visit(&mut self) -> bool {
        self.visited += 1;
        if self.visited.is_multiple_of(DEADLINE_CHECK_EVERY) {
            if let Some(deadline) = self.deadline {
                self.expired = Instant::now() >= deadline;
            }
        }
        !self.expired
    }

    pub(crate) fn already_found(&self, codes: &[u8]) -> bool {
        self.found.contains_key(codes)
    }

    pub(crate) fn emit(&mut self, codes: &[u8], support: usize) {
        self.found.entry(codes.to_vec()).or_insert(support);
    }

    pub(crate) fn into_motifs(self) -> impl Iterator<Item = (Lmer, usize)> {
        self.found.into_iter().map(|(k, v)| (Lmer::new(k), v))
    }
}

/// A search decomposed into independent window-rooted subproblems.
pub(crate) trait RootSearch: Sync {
    type Scratch;

    fn root_strings(&self) -> usize;
    fn windows(&self) -> usize;
    fn scratch(&self) -> Self::Scratch;

    /// Explores everything rooted at window `window` of sequence `string`.
    /// Returns `false` if the deadline expired.
    fn search(
        &self,
        scratch: &mut Self::Scratch,
        string: usize,
        window: usize,
        sink: &mut Sink,
    ) -> bool;
}

pub(crate) fn run<S: RootSearch>(
    search: &S,
    threads: usize,
    chunk: usize,
    deadline: Option<Instant>,
) -> Result<(Vec<(Lmer, usize)>, SolveStats)> {
    let units = work_units(search.root_strings(), search.windows(), chunk);
    let next = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);

    let worker = || {
        let mut scratch = search.scratch();
        let mut sink = Sink::new(deadline);
        while !stop.load(Ordering::Relaxed) {
            let idx = next.fetch_add(1, Ordering::Relaxed);
            let Some(unit) = units.get(idx) else { break };
            for w in unit.first_window..unit.end_window {
                if !search.search(&mut scratch, unit.string, w, &mut sink) {
                    stop.store(true, Ordering::Relaxed);
                    break;
                }
            }
        }
        sink
    };

    let threads = threads.clamp(1, units.len().max(1));
    let sinks: Vec<Sink> = if threads == 1 {
        vec![worker()]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads).map(|_| scope.spawn(worker)).collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        })
    };
    if stop.load(Ordering::Relaxed) {
        return Err(Error::TimedOut);
    }

    let mut stats = SolveStats {
        work_units: units.len(),
        ..SolveStats::default()
    };
    let mut motifs = Vec::new();
    for sink in sinks {
        stats.visited_nodes += sink.visited;
        stats.verified_candidates += sink.verified;
        motifs.extend(sink.into_motifs());
    }
    Ok((motifs, stats))
}

/// Runs the configured solver over `opts.threads` workers.
pub fn schedule(inst: &Instance, opts: &SolverOptions) -> Result<Solution> {
    let started = Instant::now();
    let (motifs, mut stats) = match opts.algorithm {
        Algorithm::Oracle => solvers::oracle::run(inst, opts)?,
        Algorithm::Prune => solvers::prune::run(inst, opts)?,
        Algorithm::Qpms7 | Algorithm::Traver | Algorithm::Sigma => solvers::pair::run(inst, opts)?,
        Algorithm::Subset => solvers::subset::run(inst, opts)?,
    };
    stats.elapsed = started.elapsed();
    Ok(Solution {
        motifs: MotifSet::new(inst.l(), inst.d(), inst.q(), motifs),
        stats,
    })
}

//! Single-root neighborhood search.
//!
//! Every motif lies within d of an l-mer x of one of the first n − q + 1
//! sequences and is a (l, d, q − 1)-motif of the remaining ones. For each
//! such x the tree T_d(x) is walked depth first while the distance from the
//! current node t to every window of every other sequence is kept up to date
//! one symbol change at a time. A subtree is cut when fewer than q − 1 of the
//! other sequences come within 2d − d_H(t, x) of t.

use crate::bitpack::{mismatches, update_and_min};
use crate::error::Result;
use crate::model::{Instance, Lmer};
use crate::neighborhood::{traverse_tree, NeighborhoodNode, TreeVisitor, Visit};
use crate::schedule::{run as run_units, RootSearch, Sink};
use crate::solvers::{support_plain, SolveStats, SolverOptions};

pub(crate) fn run(
    inst: &Instance,
    opts: &SolverOptions,
) -> Result<(Vec<(Lmer, usize)>, SolveStats)> {
    let search = PruneSearch {
        inst,
        quorum_pruning: opts.quorum_pruning,
    };
    run_units(&search, opts.threads, opts.chunk, opts.deadline)
}

pub(crate) struct PruneSearch<'a> {
    pub(crate) inst: &'a Instance,
    pub(crate) quorum_pruning: bool,
}

pub(crate) struct PruneScratch {
    /// `dists[j][r]`: distance from the current node to window r of s_j.
    dists: Vec<Vec<u16>>,
    /// Minimum of `dists[j]`.
    mins: Vec<u16>,
}

impl RootSearch for PruneSearch<'_> {
    type Scratch = PruneScratch;

    fn root_strings(&self) -> usize {
        self.inst.n() - self.inst.q() + 1
    }

    fn windows(&self) -> usize {
        self.inst.windows()
    }

    fn scratch(&self) -> PruneScratch {
        let (n, w) = (self.inst.n(), self.inst.windows());
        PruneScratch {
            dists: vec![vec![0; w]; n],
            mins: vec![0; n],
        }
    }

    fn search(
        &self,
        scratch: &mut PruneScratch,
        string: usize,
        window: usize,
        sink: &mut Sink,
    ) -> bool {
        let inst = self.inst;
        let l = inst.l();
        let x = inst.sequence(string).window(window, l);
        for (j, s) in inst.sequences().iter().enumerate() {
            if j == string {
                continue;
            }
            for (r, slot) in scratch.dists[j].iter_mut().enumerate() {
                *slot = mismatches(x, s.window(r, l)) as u16;
            }
            scratch.mins[j] = scratch.dists[j].iter().copied().min().unwrap_or(u16::MAX);
        }
        let mut visitor = PruneVisitor {
            search: self,
            root: string,
            scratch,
            sink,
        };
        traverse_tree(x, inst.d(), inst.sigma(), &mut visitor)
    }
}

struct PruneVisitor<'s, 'a> {
    search: &'s PruneSearch<'a>,
    root: usize,
    scratch: &'s mut PruneScratch,
    sink: &'s mut Sink,
}

impl PruneVisitor<'_, '_> {
    /// Applies `old → new` at `pos` to every other sequence's distances and
    /// refreshes the minima.
    fn apply(&mut self, pos: usize, old: u8, new: u8) {
        let inst = self.search.inst;
        for (j, s) in inst.sequences().iter().enumerate() {
            if j == self.root {
                continue;
            }
            self.scratch.mins[j] =
                update_and_min(&mut self.scratch.dists[j], pos, old, new, s.codes());
        }
    }
}

impl TreeVisitor for PruneVisitor<'_, '_> {
    fn enter(&mut self, node: &NeighborhoodNode<'_>) -> Visit {
        if !self.sink.visit() {
            return Visit::Abort;
        }
        if let Some(c) = node.change {
            self.apply(c.position, c.old, c.new);
        }
        let inst = self.search.inst;
        let (d, q) = (inst.d(), inst.q());
        let near_limit = (2 * d).saturating_sub(node.level) as u16;
        let mut within_d = 0;
        let mut within_near = 0;
        for (j, &m) in self.scratch.mins.iter().enumerate() {
            if j == self.root {
                continue;
            }
            within_d += usize::from(m as usize <= d);
            within_near += usize::from(m <= near_limit);
        }

        if self.search.quorum_pruning && within_near + 1 < q {
            if let Some(c) = node.change {
                self.apply(c.position, c.new, c.old);
            }
            return Visit::Prune;
        }
        if within_d + 1 >= q && !self.sink.already_found(node.candidate) {
            self.sink.verified += 1;
            let support = support_plain(inst, node.candidate);
            if support >= q {
                self.sink.emit(node.candidate, support);
            }
        }
        if node.level < d {
            Visit::Descend
        } else {
            if let Some(c) = node.change {
                self.apply(c.position, c.new, c.old);
            }
            Visit::Prune
        }
    }

    fn leave(&mut self, node: &NeighborhoodNode<'_>) {
        if let Some(c) = node.change {
            self.apply(c.position, c.new, c.old);
        }
    }
}

//! Solve the first k sequences, verify against all n.
//!
//! A motif of the whole instance occurs in at least q − (n − k) of the first
//! k sequences, so the motifs of that sub-instance (with the reduced quorum)
//! are a superset of the answer. That needs q − (n − k) ≥ 1; a smaller k is
//! raised to n − q + 1, since otherwise a motif may miss the subset entirely.

use crate::error::{Error, Result};
use crate::model::{validate_instance, Instance, Lmer};
use crate::schedule::schedule;
use crate::solvers::{support_plain, Algorithm, SolveStats, SolverOptions};

/// Smallest k whose sub-quorum is at least 2, but never less than half of
/// the sequences.
pub fn default_subset_size(n: usize, q: usize) -> usize {
    (n + 2).saturating_sub(q).max(n.div_ceil(2)).clamp(2, n)
}

pub(crate) fn run(
    inst: &Instance,
    opts: &SolverOptions,
) -> Result<(Vec<(Lmer, usize)>, SolveStats)> {
    let (n, q) = (inst.n(), inst.q());
    let k = opts
        .subset_size
        .unwrap_or_else(|| default_subset_size(n, q));
    if !(2..=n).contains(&k) {
        return Err(Error::BadParams(format!(
            "subset size k = {k} outside 2..={n}"
        )));
    }
    let k = k.max(n + 1 - q);
    let sub_q = q + k - n;
    let sub = validate_instance(
        inst.alphabet().clone(),
        inst.sequences()[..k].to_vec(),
        inst.l(),
        inst.d(),
        sub_q,
    )?;

    let mut base = opts.clone();
    base.algorithm = match opts.subset_base {
        Algorithm::Subset => Algorithm::Sigma,
        other => other,
    };
    if base.algorithm == Algorithm::Sigma {
        base.use_compressed = true;
    }
    let partial = schedule(&sub, &base)?;

    let mut stats = partial.stats;
    let mut out = Vec::new();
    for (motif, _) in partial.motifs.motifs() {
        stats.verified_candidates += 1;
        let support = support_plain(inst, motif.codes());
        if support >= q {
            out.push((motif.clone(), support));
        }
    }
    Ok((out, stats))
}

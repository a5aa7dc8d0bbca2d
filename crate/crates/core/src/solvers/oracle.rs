//! Pattern-driven brute force: every l-mer over Σ is checked directly.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::model::{Instance, Lmer};
use crate::solvers::{SolveStats, SolverOptions};

pub(crate) fn run(
    inst: &Instance,
    opts: &SolverOptions,
) -> Result<(Vec<(Lmer, usize)>, SolveStats)> {
    let (l, d, q) = (inst.l(), inst.d(), inst.q());
    let sigma = inst.sigma() as u8;
    let needed = (sigma as u128).checked_pow(l as u32).unwrap_or(u128::MAX);
    if needed > opts.oracle_budget as u128 {
        return Err(Error::BudgetExceeded {
            needed,
            budget: opts.oracle_budget,
        });
    }

    let mut out = Vec::new();
    let mut stats = SolveStats {
        work_units: 1,
        ..SolveStats::default()
    };
    let mut cand = vec![0u8; l];
    loop {
        stats.visited_nodes += 1;
        if stats.visited_nodes.is_multiple_of(1024)
            && opts.deadline.is_some_and(|t| Instant::now() >= t)
        {
            return Err(Error::TimedOut);
        }
        let mut support = 0;
        for s in inst.sequences() {
            let codes = s.codes();
            let hit = (0..=codes.len() - l).any(|start| {
                let mut miss = 0;
                for j in 0..l {
                    if codes[start + j] != cand[j] {
                        miss += 1;
                    }
                }
                miss <= d
            });
            if hit {
                support += 1;
            }
        }
        stats.verified_candidates += 1;
        if support >= q {
            out.push((Lmer::new(cand.clone()), support));
        }

        // odometer, last position fastest: lexicographic order
        let mut pos = l;
        loop {
            if pos == 0 {
                return Ok((out, stats));
            }
            pos -= 1;
            cand[pos] += 1;
            if cand[pos] < sigma {
                break;
            }
            cand[pos] = 0;
        }
    }
}

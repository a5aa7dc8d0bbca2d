use qpms_core::model::Instance;
use qpms_core::{Solution, SolverOptions};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotifEntry {
    pub motif: String,
    pub support: usize,
}

/// JSON summary of one `solve` run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub d: usize,
    pub q: usize,
    pub algorithm: String,
    pub threads: usize,
    pub wall_time_s: f64,
    pub visited_nodes: u64,
    pub verified_candidates: u64,
    pub work_units: usize,
    pub motif_count: usize,
    /// `None` when the list was longer than the listing limit.
    pub motifs: Option<Vec<MotifEntry>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub recovered: Option<bool>,
}

impl RunReport {
    pub fn new(
        inst: &Instance,
        opts: &SolverOptions,
        solution: &Solution,
        recovered: Option<bool>,
        max_listed: usize,
    ) -> Self {
        let set = &solution.motifs;
        let motifs = (set.len() <= max_listed).then(|| {
            set.motifs()
                .iter()
                .map(|(m, support)| MotifEntry {
                    motif: m.to_string(inst.alphabet()),
                    support: *support,
                })
                .collect()
        });
        RunReport {
            schema: 1,
            n: inst.n(),
            m: inst.m(),
            l: inst.l(),
            d: inst.d(),
            q: inst.q(),
            algorithm: opts.algorithm.name().to_string(),
            threads: opts.threads,
            wall_time_s: solution.stats.elapsed.as_secs_f64(),
            visited_nodes: solution.stats.visited_nodes,
            verified_candidates: solution.stats.verified_candidates,
            work_units: solution.stats.work_units,
            motif_count: set.len(),
            motifs,
            recovered,
        }
    }
}

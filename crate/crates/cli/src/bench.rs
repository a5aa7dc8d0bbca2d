//! Runs solvers over the challenging planted instances (13,4) .. (23,9).

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use qpms_core::datagen::generate_fm;
use qpms_core::schedule::schedule;
use qpms_core::{Algorithm, Error, SolverOptions};
use serde::Serialize;

use crate::{AlgoArg, AlphabetArg};

pub const CHALLENGING: [(usize, usize); 6] = [(13, 4), (15, 5), (17, 6), (19, 7), (21, 8), (23, 9)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Challenging,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value = "challenging")]
    pub suite: Suite,
    #[arg(long, default_value_t = 20)]
    pub q: usize,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "sigma")]
    pub algos: Vec<AlgoArg>,
    /// Per-run limit in seconds.
    #[arg(long, default_value_t = 60.0)]
    pub timeout: f64,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub seeds: Vec<u64>,
    /// Restrict to these shapes, e.g. `13:4,15:5`.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    #[arg(long, default_value_t = 600)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[arg(long, value_enum, default_value = "dna")]
    pub alphabet: AlphabetArg,
    /// Also write one JSON object per row to this file.
    #[arg(long)]
    pub rows: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub l: usize,
    pub d: usize,
    pub q: usize,
    pub seed: u64,
    pub algorithm: String,
    /// `ok`, `TIMEOUT` or an error message.
    pub status: String,
    pub wall_time_s: Option<f64>,
    pub visited_nodes: Option<u64>,
    pub motifs: Option<usize>,
    pub recovered: Option<bool>,
}

fn parse_shape(s: &str) -> anyhow::Result<(usize, usize)> {
    let (l, d) = s
        .split_once(':')
        .with_context(|| format!("shape {s:?} is not L:D"))?;
    Ok((l.trim().parse()?, d.trim().parse()?))
}

pub(crate) fn cmd_bench(a: &BenchArgs) -> anyhow::Result<()> {
    let Suite::Challenging = a.suite;
    let only = a
        .only
        .iter()
        .map(|s| parse_shape(s))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let shapes: Vec<(usize, usize)> = if only.is_empty() {
        CHALLENGING.to_vec()
    } else {
        only
    };
    if a.q == 0 || a.q > a.n {
        return Err(Error::BadParams(format!("q = {} outside 1..={}", a.q, a.n)).into());
    }
    if a.algos.is_empty() || a.seeds.is_empty() {
        bail!(Error::BadParams(
            "need at least one algorithm and one seed".into()
        ));
    }
    let mut sink = match &a.rows {
        Some(path) => Some(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => None,
    };

    let mut rows = Vec::new();
    for &(l, d) in &shapes {
        for &seed in &a.seeds {
            let planted = generate_fm(a.n, a.m, l, d, a.q, a.alphabet.alphabet(), seed)?;
            for &algo in &a.algos {
                let algo: Algorithm = algo.into();
                let opts = SolverOptions::new(algo)
                    .threads(a.threads)
                    .timeout(Duration::from_secs_f64(a.timeout.max(0.0)));
                let mut row = BenchRow {
                    l,
                    d,
                    q: a.q,
                    seed,
                    algorithm: algo.name().to_string(),
                    status: "ok".into(),
                    wall_time_s: None,
                    visited_nodes: None,
                    motifs: None,
                    recovered: None,
                };
                match schedule(&planted.instance, &opts) {
                    Ok(sol) => {
                        row.wall_time_s = Some(sol.stats.elapsed.as_secs_f64());
                        row.visited_nodes = Some(sol.stats.visited_nodes);
                        row.motifs = Some(sol.motifs.len());
                        row.recovered = Some(sol.motifs.contains(&planted.motif));
                    }
                    Err(Error::TimedOut) => row.status = "TIMEOUT".into(),
                    Err(e) => row.status = e.to_string(),
                }
                if let Some(out) = sink.as_mut() {
                    serde_json::to_writer(&mut *out, &row)?;
                    out.write_all(b"\n")?;
                }
                rows.push(row);
            }
        }
    }
    if let Some(mut out) = sink {
        out.flush()?;
    }
    print!("{}", render_table(&rows));
    Ok(())
}

pub fn render_table(rows: &[BenchRow]) -> String {
    let header = [
        "l",
        "d",
        "q",
        "seed",
        "algo",
        "time_s",
        "nodes",
        "motifs",
        "recovered",
    ];
    let cells: Vec<[String; 9]> = rows
        .iter()
        .map(|r| {
            let time = match r.wall_time_s {
                Some(t) => format!("{t:.3}"),
                None => r.status.clone(),
            };
            let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
            [
                r.l.to_string(),
                r.d.to_string(),
                r.q.to_string(),
                r.seed.to_string(),
                r.algorithm.clone(),
                time,
                opt(r.visited_nodes.map(|v| v.to_string())),
                opt(r.motifs.map(|v| v.to_string())),
                opt(r.recovered.map(|v| v.to_string())),
            ]
        })
        .collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let mut line = |fields: &mut dyn Iterator<Item = &str>| {
        let parts: Vec<String> = fields
            .zip(&widths)
            .map(|(f, w)| format!("{f:>w$}"))
            .collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(&mut header.iter().copied());
    for row in &cells {
        line(&mut row.iter().map(String::as_str));
    }
    out
}

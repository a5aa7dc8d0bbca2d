//! Alignment, profile and consensus of chosen l-mer occurrences.
//!
//! Given one start position per sequence, the l-mers at those starts form a
//! t × l alignment. The profile counts each symbol per column, the consensus
//! string takes the most frequent symbol of every column, and the consensus
//! score adds up the column maxima. [`best_starts`] maximises the score by
//! trying every start vector.

use crate::error::{Error, Result};
use crate::model::{Alphabet, Lmer, Sequence};

/// 1-based start positions, one per sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StartVector(pub Vec<usize>);

impl StartVector {
    pub fn new(starts: Vec<usize>) -> Self {
        StartVector(starts)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Rows are the l-mers at the given starts.
pub fn alignment_matrix(seqs: &[Sequence], starts: &StartVector, l: usize) -> Result<Vec<Vec<u8>>> {
    if starts.len() != seqs.len() {
        return Err(Error::LengthMismatch {
            left: starts.len(),
            right: seqs.len(),
        });
    }
    seqs.iter()
        .zip(starts.as_slice())
        .enumerate()
        .map(|(i, (s, &start))| {
            let max = (s.len() + 1).saturating_sub(l);
            if l == 0 || start < 1 || start > max {
                return Err(Error::BadStart {
                    sequence: i + 1,
                    start,
                    max,
                });
            }
            Ok(s.window(start - 1, l).to_vec())
        })
        .collect()
}

/// σ × l symbol counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileMatrix {
    sigma: usize,
    l: usize,
    rows: usize,
    counts: Vec<usize>,
}

impl ProfileMatrix {
    /// Builds a profile from explicit counts, `counts[symbol][column]`.
    pub fn from_counts(counts: &[Vec<usize>]) -> Result<Self> {
        let sigma = counts.len();
        let l = counts.first().map_or(0, Vec::len);
        if sigma == 0 || counts.iter().any(|row| row.len() != l) {
            return Err(Error::BadParams(
                "profile rows must be non-empty and equally long".into(),
            ));
        }
        let rows = (0..sigma)
            .map(|a| counts[a].first().copied().unwrap_or(0))
            .sum();
        for j in 0..l {
            let col: usize = counts.iter().map(|row| row[j]).sum();
            if col != rows {
                return Err(Error::BadParams(format!(
                    "column {} sums to {col}, expected {rows}",
                    j + 1
                )));
            }
        }
        Ok(ProfileMatrix {
            sigma,
            l,
            rows,
            counts: counts.concat(),
        })
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn len(&self) -> usize {
        self.l
    }

    pub fn is_empty(&self) -> bool {
        self.l == 0
    }

    /// Number of aligned sequences t.
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn count(&self, symbol: u8, column: usize) -> usize {
        self.counts[symbol as usize * self.l + column]
    }

    pub fn column_max(&self, column: usize) -> usize {
        (0..self.sigma)
            .map(|a| self.counts[a * self.l + column])
            .max()
            .unwrap_or(0)
    }

    /// Tab-separated table, one line per symbol.
    pub fn render(&self, alphabet: &Alphabet) -> String {
        let mut out = String::new();
        for a in 0..self.sigma {
            out.push(alphabet.symbol(a as u8));
            for j in 0..self.l {
                out.push('\t');
                out.push_str(&self.count(a as u8, j).to_string());
            }
            out.push('\n');
        }
        out
    }
}

pub fn profile_matrix(alignment: &[Vec<u8>], sigma: usize) -> Result<ProfileMatrix> {
    let l = alignment.first().map_or(0, Vec::len);
    if let Some(row) = alignment.iter().find(|r| r.len() != l) {
        return Err(Error::LengthMismatch {
            left: row.len(),
            right: l,
        });
    }
    let mut counts = vec![0usize; sigma * l];
    for row in alignment {
        for (j, &c) in row.iter().enumerate() {
            if c as usize >= sigma {
                return Err(Error::BadParams(format!(
                    "symbol code {c} outside alphabet of size {sigma}"
                )));
            }
            counts[c as usize * l + j] += 1;
        }
    }
    Ok(ProfileMatrix {
        sigma,
        l,
        rows: alignment.len(),
        counts,
    })
}

/// Most frequent symbol per column, lowest code on ties.
pub fn consensus_string(profile: &ProfileMatrix) -> Lmer {
    let codes = (0..profile.l)
        .map(|j| {
            let mut best = 0u8;
            for a in 1..profile.sigma as u8 {
                if profile.count(a, j) > profile.count(best, j) {
                    best = a;
                }
            }
            best
        })
        .collect();
    Lmer::new(codes)
}

/// Sum of the column maxima.
pub fn consensus_score(profile: &ProfileMatrix) -> usize {
    (0..profile.l).map(|j| profile.column_max(j)).sum()
}

/// Exhaustive maximisation of the consensus score over all start vectors.
/// Among maximisers the lexicographically smallest vector is returned.
pub fn best_starts(
    seqs: &[Sequence],
    l: usize,
    sigma: usize,
    budget: u64,
) -> Result<(StartVector, usize)> {
    if seqs.is_empty() {
        return Err(Error::BadParams("no sequences".into()));
    }
    let windows: Vec<usize> = seqs
        .iter()
        .map(|s| (s.len() + 1).saturating_sub(l))
        .collect();
    if l == 0 || windows.contains(&0) {
        return Err(Error::BadParams(format!(
            "l = {l} does not fit every sequence"
        )));
    }
    let needed = windows
        .iter()
        .try_fold(1u128, |acc, &w| acc.checked_mul(w as u128))
        .unwrap_or(u128::MAX);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }

    let mut search = StartSearch {
        seqs,
        windows: &windows,
        l,
        sigma,
        counts: vec![0; l * sigma],
        starts: vec![0; seqs.len()],
        best: None,
    };
    search.descend(0);
    let (starts, score) = search.best.expect("at least one start vector");
    Ok((StartVector(starts), score))
}

struct StartSearch<'a> {
    seqs: &'a [Sequence],
    windows: &'a [usize],
    l: usize,
    sigma: usize,
    /// `counts[j * sigma + a]` over the rows placed so far.
    counts: Vec<usize>,
    starts: Vec<usize>,
    best: Option<(Vec<usize>, usize)>,
}

impl StartSearch<'_> {
    fn descend(&mut self, depth: usize) {
        if depth == self.seqs.len() {
            let score: usize = self
                .counts
                .chunks(self.sigma)
                .map(|col| col.iter().copied().max().unwrap_or(0))
                .sum();
            if self.best.as_ref().is_none_or(|(_, s)| score > *s) {
                self.best = Some((self.starts.clone(), score));
            }
            return;
        }
        for w in 0..self.windows[depth] {
            let window = self.seqs[depth].window(w, self.l);
            for (j, &c) in window.iter().enumerate() {
                self.counts[j * self.sigma + c as usize] += 1;
            }
            self.starts[depth] = w + 1;
            self.descend(depth + 1);
            for (j, &c) in window.iter().enumerate() {
                self.counts[j * self.sigma + c as usize] -= 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(text: &str) -> Sequence {
        Sequence::new(None, Alphabet::dna().encode(text).unwrap()).unwrap()
    }

    #[test]
    fn single_sequence_first_window() {
        let s = [seq("ACGTTT")];
        let a = alignment_matrix(&s, &StartVector::new(vec![1]), 3).unwrap();
        assert_eq!(a, vec![vec![0, 1, 2]]);
        assert_eq!(
            best_starts(&s, 3, 4, 100).unwrap(),
            (StartVector::new(vec![1]), 3)
        );
    }

    #[test]
    fn bad_start_is_reported() {
        let s = [seq("ACGTTT"), seq("ACGTTT")];
        let err = alignment_matrix(&s, &StartVector::new(vec![1, 5]), 3).unwrap_err();
        assert_eq!(
            err,
            Error::BadStart {
                sequence: 2,
                start: 5,
                max: 4
            }
        );
        assert!(alignment_matrix(&s, &StartVector::new(vec![0, 1]), 3).is_err());
    }

    #[test]
    fn mixed_column_counts_one_each() {
        let a = vec![vec![0], vec![1], vec![2], vec![3]];
        let p = profile_matrix(&a, 4).unwrap();
        assert!((0..4).all(|c| p.count(c, 0) == 1));
        assert_eq!(consensus_string(&p).codes(), &[0]);
    }

    #[test]
    fn ties_take_lowest_code() {
        let p = profile_matrix(&[vec![1, 3], vec![0, 2]], 4).unwrap();
        assert_eq!(consensus_string(&p).codes(), &[0, 2]);
    }

    #[test]
    fn identical_rows_score_t_times_l() {
        let rows = vec![vec![2, 0, 3, 1, 1]; 6];
        let p = profile_matrix(&rows, 4).unwrap();
        assert_eq!(consensus_score(&p), 30);
        assert_eq!(consensus_string(&p).codes(), rows[0].as_slice());
    }

    #[test]
    fn shared_lmer_reaches_upper_bound() {
        let s = [seq("TTGACCA"), seq("GACCTTT"), seq("CCCGACC")];
        let (starts, score) = best_starts(&s, 4, 4, 1000).unwrap();
        assert_eq!(score, 12);
        assert_eq!(starts, StartVector::new(vec![3, 1, 4]));
    }

    #[test]
    fn budget_is_enforced() {
        let s = [seq("ACGTACGT"), seq("ACGTACGT"), seq("ACGTACGT")];
        assert_eq!(
            best_starts(&s, 2, 4, 300).unwrap_err(),
            Error::BudgetExceeded {
                needed: 343,
                budget: 300
            }
        );
    }
}

//! Per-sequence rows of surviving candidate windows, kept as frames on one
//! contiguous stack. Each frame holds the subset of its parent's windows
//! that passed a filter, with rows ordered by size so the smallest rows are
//! filtered (and found empty) first.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Row {
    seq: u32,
    start: u32,
    len: u32,
}

#[derive(Debug, Clone, Copy)]
struct Frame {
    rows: usize,
    data: usize,
}

#[derive(Debug, Clone, Default)]
pub struct WindowSet {
    data: Vec<u32>,
    rows: Vec<Row>,
    frames: Vec<Frame>,
}

impl WindowSet {
    pub fn new() -> Self {
        WindowSet::default()
    }

    pub fn clear(&mut self) {
        self.data.clear();
        self.rows.clear();
        self.frames.clear();
    }

    /// Starts a fresh stack whose first frame holds the given rows. Window
    /// indices within each row must be ascending. Empty rows are dropped.
    pub fn reset<'a, I>(&mut self, rows: I)
    where
        I: IntoIterator<Item = (usize, &'a [u32])>,
    {
        self.clear();
        self.frames.push(Frame { rows: 0, data: 0 });
        for (seq, windows) in rows {
            if windows.is_empty() {
                continue;
            }
            debug_assert!(windows.windows(2).all(|w| w[0] < w[1]));
            self.rows.push(Row {
                seq: seq as u32,
                start: self.data.len() as u32,
                len: windows.len() as u32,
            });
            self.data.extend_from_slice(windows);
        }
        self.sort_top();
    }

    /// Begins a first frame that is filled row by row with `push_row`.
    pub(crate) fn begin(&mut self) {
        self.clear();
        self.frames.push(Frame { rows: 0, data: 0 });
    }

    pub(crate) fn push_row(&mut self, seq: usize, windows: impl Iterator<Item = u32>) {
        let start = self.data.len();
        self.data.extend(windows);
        let len = self.data.len() - start;
        if len > 0 {
            self.rows.push(Row {
                seq: seq as u32,
                start: start as u32,
                len: len as u32,
            });
        }
    }

    pub(crate) fn finish(&mut self) {
        self.sort_top();
    }

    fn sort_top(&mut self) {
        let first = self.frames.last().map_or(0, |f| f.rows);
        self.rows[first..].sort_unstable_by_key(|r| (r.len, r.seq));
    }

    fn top_rows(&self) -> &[Row] {
        let first = self.frames.last().map_or(0, |f| f.rows);
        &self.rows[first..]
    }

    /// Number of non-empty rows in the top frame.
    pub fn live(&self) -> usize {
        self.top_rows().len()
    }

    pub fn depth(&self) -> usize {
        self.frames.len()
    }

    /// Rows of the top frame as (sequence, windows), smallest row first.
    pub fn rows(&self) -> impl Iterator<Item = (usize, &[u32])> + '_ {
        self.top_rows().iter().map(|r| {
            (
                r.seq as usize,
                &self.data[r.start as usize..(r.start + r.len) as usize],
            )
        })
    }

    pub fn row(&self, seq: usize) -> Option<&[u32]> {
        self.rows().find(|(s, _)| *s == seq).map(|(_, w)| w)
    }

    /// Pushes a frame holding, for each row, the windows `keep` accepts.
    /// Gives up (pushing nothing) as soon as fewer than `min_live` rows can
    /// remain non-empty. Returns whether a frame was pushed.
    pub fn push_filtered<F>(&mut self, min_live: usize, mut keep: F) -> bool
    where
        F: FnMut(usize, u32) -> bool,
    {
        let Some(&top) = self.frames.last() else {
            return false;
        };
        let parent_rows = self.rows.len() - top.rows;
        if parent_rows < min_live {
            return false;
        }
        let allowed_empty = parent_rows - min_live;
        let frame = Frame {
            rows: self.rows.len(),
            data: self.data.len(),
        };
        let mut empty = 0;
        for idx in top.rows..frame.rows {
            let row = self.rows[idx];
            let start = self.data.len();
            for k in row.start..row.start + row.len {
                let w = self.data[k as usize];
                if keep(row.seq as usize, w) {
                    self.data.push(w);
                }
            }
            let len = self.data.len() - start;
            if len == 0 {
                empty += 1;
                if empty > allowed_empty {
                    self.rows.truncate(frame.rows);
                    self.data.truncate(frame.data);
                    return false;
                }
            } else {
                self.rows.push(Row {
                    seq: row.seq,
                    start: start as u32,
                    len: len as u32,
                });
            }
        }
        self.frames.push(frame);
        self.sort_top();
        true
    }

    /// Drops the top frame; the first frame is never popped.
    pub fn pop(&mut self) {
        if self.frames.len() > 1 {
            let f = self.frames.pop().expect("frame");
            self.rows.truncate(f.rows);
            self.data.truncate(f.data);
        }
    }
}

/// One filtering step as a standalone operation: returns a window set whose
/// single frame holds the surviving windows of `ws`'s top frame.
pub fn filter_windows<F>(ws: &WindowSet, keep: F) -> WindowSet
where
    F: FnMut(usize, u32) -> bool,
{
    let mut copy = WindowSet::new();
    copy.reset(ws.rows());
    copy.push_filtered(0, keep);
    let mut out = WindowSet::new();
    out.reset(copy.rows());
    out
}

//! Root/reference pair search.
//!
//! Every (l, d, q)-motif M has a first and a second sequence (in some fixed
//! order) holding an occurrence within d; call those occurrences x0 and r.
//! Then d_H(x0, r) ≤ 2d, M lies in B(x0, d) ∩ B(r, d), and M is a
//! (l, d, q − 2)-motif of the sequences after the second one. The search
//! walks T_d(x0) for every such pair and cuts a node as soon as no
//! descendant can lie in both balls, or fewer than q − 2 of the remaining
//! sequences still have a window whose d-ball can meet them.
//!
//! Two feasibility rules are implemented:
//!
//! * whole-string: node t at level h is kept while
//!   B(t, d − h) ∩ B(r, d) ∩ B(y, d) ≠ ∅;
//! * prefix-fixed: descendants of t never touch the positions up to t's own
//!   change, so the test runs on the remaining suffix only, with each radius
//!   reduced by the mismatches already fixed in the prefix.
//!
//! The prefix-fixed search also restricts the quorum bookkeeping to the
//! sequences after the reference, can pick the reference sequence that is
//! farthest from x0, and can traverse the positions where x0 and r differ
//! first.

use crate::bitpack::{
    mismatches, packed_distance, popcount, precompute_pair_distances, PairDistanceTable, WORD_BITS,
};
use crate::error::Result;
use crate::model::{Instance, Lmer};
use crate::neighborhood::{
    balls_intersect_counts, traverse_tree_ordered, two_balls_intersect, NeighborhoodNode,
    PositionPermutation, TreeVisitor, Visit,
};
use crate::schedule::{run as run_units, RootSearch, Sink};
use crate::solvers::{prune, support_plain, Algorithm, SolveStats, SolverOptions, WindowSet};

pub(crate) fn run(
    inst: &Instance,
    opts: &SolverOptions,
) -> Result<(Vec<(Lmer, usize)>, SolveStats)> {
    if inst.q() < 2 {
        return prune::run(inst, opts);
    }
    let table = precompute_pair_distances(inst);
    let config = if opts.algorithm == Algorithm::Qpms7 {
        PairConfig {
            rule: Rule::Whole,
            elimination: false,
            string_reordering: false,
            position_reordering: false,
        }
    } else {
        PairConfig {
            rule: Rule::PrefixFixed,
            elimination: true,
            string_reordering: opts.string_reordering,
            position_reordering: opts.position_reordering,
        }
    };
    if opts.compressed() {
        let search = PairSearch {
            inst,
            table: &table,
            config,
            engine: Packed {
                inst,
                table: &table,
            },
        };
        run_units(&search, opts.threads, opts.chunk, opts.deadline)
    } else {
        let search = PairSearch {
            inst,
            table: &table,
            config,
            engine: Plain { inst },
        };
        run_units(&search, opts.threads, opts.chunk, opts.deadline)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rule {
    Whole,
    PrefixFixed,
}

#[derive(Debug, Clone, Copy)]
struct PairConfig {
    rule: Rule,
    /// Count the quorum over the sequences after the reference only.
    elimination: bool,
    string_reordering: bool,
    position_reordering: bool,
}

/// Suffix quantities of window y against (x0, r, t) for a prefix length.
#[derive(Debug, Clone, Copy, Default)]
struct PrefixStats {
    /// d_H(t, y) over the fixed prefix.
    pre_ty: usize,
    /// d_H(x0, y) over the free suffix.
    suf_xy: usize,
    /// d_H(r, y) over the free suffix.
    suf_ry: usize,
    /// Suffix positions where x0, r and y are not all equal.
    suf_mixed: usize,
}

/// Whole-string quantities of window y against (t, r).
#[derive(Debug, Clone, Copy, Default)]
struct WholeStats {
    ty: usize,
    ry: usize,
    mixed: usize,
}

/// Distance arithmetic for the pair search, on raw codes or packed l-mers.
trait Engine: Sync {
    type State: Send;

    fn state(&self) -> Self::State;
    fn distance(&self, a: (usize, usize), b: (usize, usize)) -> usize;
    fn begin_pair(
        &self,
        st: &mut Self::State,
        x0: (usize, usize),
        r: (usize, usize),
        order: &[usize],
    );
    fn set(&self, st: &mut Self::State, pos: usize, code: u8);
    fn set_prefix(&self, st: &mut Self::State, prefix_len: usize);
    fn prefix_stats(&self, st: &Self::State, seq: usize, w: usize) -> PrefixStats;
    fn whole_stats(&self, st: &Self::State, seq: usize, w: usize) -> WholeStats;
    fn node_distance(&self, st: &Self::State, seq: usize, w: usize) -> usize;
    fn support(&self, st: &Self::State, t: &[u8]) -> usize;
}

struct Plain<'a> {
    inst: &'a Instance,
}

#[derive(Default)]
struct PlainState {
    x0: Vec<u8>,
    r: Vec<u8>,
    t: Vec<u8>,
    slot_of: Vec<usize>,
    in_prefix: Vec<bool>,
}

impl Engine for Plain<'_> {
    type State = PlainState;

    fn state(&self) -> PlainState {
        PlainState::default()
    }

    fn distance(&self, a: (usize, usize), b: (usize, usize)) -> usize {
        let l = self.inst.l();
        mismatches(
            self.inst.sequence(a.0).window(a.1, l),
            self.inst.sequence(b.0).window(b.1, l),
        )
    }

    fn begin_pair(
        &self,
        st: &mut PlainState,
        x0: (usize, usize),
        r: (usize, usize),
        order: &[usize],
    ) {
        let l = self.inst.l();
        st.x0.clear();
        st.x0
            .extend_from_slice(self.inst.sequence(x0.0).window(x0.1, l));
        st.r.clear();
        st.r.extend_from_slice(self.inst.sequence(r.0).window(r.1, l));
        st.t.clone_from(&st.x0);
        st.slot_of.resize(l, 0);
        for (slot, &pos) in order.iter().enumerate() {
            st.slot_of[pos] = slot;
        }
        st.in_prefix.clear();
        st.in_prefix.resize(l, false);
    }

    fn set(&self, st: &mut PlainState, pos: usize, code: u8) {
        st.t[pos] = code;
    }

    fn set_prefix(&self, st: &mut PlainState, prefix_len: usize) {
        for (flag, &slot) in st.in_prefix.iter_mut().zip(&st.slot_of) {
            *flag = slot < prefix_len;
        }
    }

    #[inline]
    fn prefix_stats(&self, st: &PlainState, seq: usize, w: usize) -> PrefixStats {
        let y = self.inst.sequence(seq).window(w, st.x0.len());
        let mut s = PrefixStats::default();
        for (j, &c) in y.iter().enumerate() {
            if st.in_prefix[j] {
                s.pre_ty += usize::from(st.t[j] != c);
            } else {
                let (xc, rc) = (st.x0[j], st.r[j]);
                s.suf_xy += usize::from(xc != c);
                s.suf_ry += usize::from(rc != c);
                s.suf_mixed += usize::from(xc != c || rc != c);
            }
        }
        s
    }

    #[inline]
    fn whole_stats(&self, st: &PlainState, seq: usize, w: usize) -> WholeStats {
        let y = self.inst.sequence(seq).window(w, st.t.len());
        let mut s = WholeStats::default();
        for ((&c, &tc), &rc) in y.iter().zip(&st.t).zip(&st.r) {
            s.ty += usize::from(tc != c);
            s.ry += usize::from(rc != c);
            s.mixed += usize::from(tc != c || rc != c);
        }
        s
    }

    fn node_distance(&self, st: &PlainState, seq: usize, w: usize) -> usize {
        mismatches(&st.t, self.inst.sequence(seq).window(w, st.t.len()))
    }

    fn support(&self, _st: &PlainState, t: &[u8]) -> usize {
        support_plain(self.inst, t)
    }
}

struct Packed<'a> {
    inst: &'a Instance,
    table: &'a PairDistanceTable,
}

#[derive(Default)]
struct PackedState {
    x0: Vec<u32>,
    r: Vec<u32>,
    t: Vec<u32>,
    /// `prefix_masks[k * wpp..]`: positions of the first k slots.
    prefix_masks: Vec<u32>,
    valid: Vec<u32>,
    prefix_len: usize,
}

impl Packed<'_> {
    fn wpp(&self) -> usize {
        self.table.packed().words_per_plane()
    }

    fn planes(&self) -> usize {
        self.table.packed().planes()
    }
}

impl Engine for Packed<'_> {
    type State = PackedState;

    fn state(&self) -> PackedState {
        let l = self.inst.l();
        let wpp = self.wpp();
        let mut valid = vec![0u32; wpp];
        for j in 0..l {
            valid[j / WORD_BITS] |= 1 << (j % WORD_BITS);
        }
        PackedState {
            valid,
            ..PackedState::default()
        }
    }

    fn distance(&self, a: (usize, usize), b: (usize, usize)) -> usize {
        self.table.packed().distance(a, b)
    }

    fn begin_pair(
        &self,
        st: &mut PackedState,
        x0: (usize, usize),
        r: (usize, usize),
        order: &[usize],
    ) {
        let packed = self.table.packed();
        let wpp = self.wpp();
        st.x0.clear();
        st.x0.extend_from_slice(packed.window(x0.0, x0.1));
        st.r.clear();
        st.r.extend_from_slice(packed.window(r.0, r.1));
        st.t.clone_from(&st.x0);
        st.prefix_masks.clear();
        st.prefix_masks.resize((order.len() + 1) * wpp, 0);
        for (slot, &pos) in order.iter().enumerate() {
            let (prev, next) = st.prefix_masks.split_at_mut((slot + 1) * wpp);
            let next = &mut next[..wpp];
            next.copy_from_slice(&prev[slot * wpp..]);
            next[pos / WORD_BITS] |= 1 << (pos % WORD_BITS);
        }
        st.prefix_len = 0;
    }

    fn set(&self, st: &mut PackedState, pos: usize, code: u8) {
        crate::bitpack::set_symbol(&mut st.t, self.planes(), self.wpp(), pos, code);
    }

    fn set_prefix(&self, st: &mut PackedState, prefix_len: usize) {
        st.prefix_len = prefix_len;
    }

    #[inline]
    fn prefix_stats(&self, st: &PackedState, seq: usize, w: usize) -> PrefixStats {
        let y = self.table.packed().window(seq, w);
        let (planes, wpp) = (self.planes(), self.wpp());
        let pre = &st.prefix_masks[st.prefix_len * wpp..(st.prefix_len + 1) * wpp];
        let mut s = PrefixStats::default();
        for word in 0..wpp {
            let (mut xy, mut ry, mut ty) = (0u32, 0u32, 0u32);
            for p in 0..planes {
                let yw = y[p * wpp + word];
                xy |= st.x0[p * wpp + word] ^ yw;
                ry |= st.r[p * wpp + word] ^ yw;
                ty |= st.t[p * wpp + word] ^ yw;
            }
            let suf = st.valid[word] & !pre[word];
            s.pre_ty += popcount(ty & pre[word]) as usize;
            s.suf_xy += popcount(xy & suf) as usize;
            s.suf_ry += popcount(ry & suf) as usize;
            s.suf_mixed += popcount((xy | ry) & suf) as usize;
        }
        s
    }

    #[inline]
    fn whole_stats(&self, st: &PackedState, seq: usize, w: usize) -> WholeStats {
        let y = self.table.packed().window(seq, w);
        let (planes, wpp) = (self.planes(), self.wpp());
        let mut s = WholeStats::default();
        for word in 0..wpp {
            let (mut ty, mut ry) = (0u32, 0u32);
            for p in 0..planes {
                let yw = y[p * wpp + word];
                ty |= st.t[p * wpp + word] ^ yw;
                ry |= st.r[p * wpp + word] ^ yw;
            }
            s.ty += popcount(ty) as usize;
            s.ry += popcount(ry) as usize;
            s.mixed += popcount(ty | ry) as usize;
        }
        s
    }

    fn node_distance(&self, st: &PackedState, seq: usize, w: usize) -> usize {
        packed_distance(
            &st.t,
            self.table.packed().window(seq, w),
            self.planes(),
            self.wpp(),
        )
    }

    fn support(&self, st: &PackedState, _t: &[u8]) -> usize {
        let packed = self.table.packed();
        let (planes, wpp, d) = (self.planes(), self.wpp(), self.inst.d());
        (0..self.inst.n())
            .filter(|&seq| {
                (0..self.inst.windows())
                    .any(|w| packed_distance(&st.t, packed.window(seq, w), planes, wpp) <= d)
            })
            .count()
    }
}

struct PairSearch<'a, E> {
    inst: &'a Instance,
    table: &'a PairDistanceTable,
    config: PairConfig,
    engine: E,
}

#[derive(Debug, Clone, Copy)]
struct Level {
    /// Slots of the position order fixed for all descendants.
    prefix_len: usize,
    /// d_H(t, r) over the fixed prefix.
    pre_tr: usize,
    /// d_H(t, r).
    tr: usize,
    /// Positions where t, r and x0 are not all equal.
    mixed: usize,
}

struct PairScratch<S> {
    ws: WindowSet,
    levels: Vec<Level>,
    order: Vec<usize>,
    /// `diff_prefix[k]`: slots below k where x0 and r differ.
    diff_prefix: Vec<usize>,
    rest: Vec<usize>,
    refs: Vec<(usize, usize)>,
    engine: S,
}

fn set_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * 64 + b)
        })
    })
}

impl<E: Engine> RootSearch for PairSearch<'_, E> {
    type Scratch = PairScratch<E::State>;

    fn root_strings(&self) -> usize {
        self.inst.n() - self.inst.q() + 1
    }

    fn windows(&self) -> usize {
        self.inst.windows()
    }

    fn scratch(&self) -> Self::Scratch {
        PairScratch {
            ws: WindowSet::new(),
            levels: Vec::new(),
            order: Vec::new(),
            diff_prefix: Vec::new(),
            rest: Vec::new(),
            refs: Vec::new(),
            engine: self.engine.state(),
        }
    }

    fn search(&self, st: &mut Self::Scratch, root: usize, p: usize, sink: &mut Sink) -> bool {
        let inst = self.inst;
        let (n, q) = (inst.n(), inst.q());
        let x0 = (root, p);

        // Candidate reference sequences in the order their slots are tried.
        let mut candidates: Vec<usize> = (root + 1..n).collect();
        if self.config.string_reordering {
            let mut keyed: Vec<(usize, usize)> = candidates
                .iter()
                .filter_map(|&h| {
                    set_bits(self.table.row(root, p, h))
                        .map(|w| self.engine.distance(x0, (h, w)))
                        .min()
                        .map(|dist| (h, dist))
                })
                .collect();
            // farthest first, ties by index
            keyed.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
            candidates = keyed.into_iter().map(|(h, _)| h).collect();
        }
        if candidates.len() + 1 < q {
            return true;
        }
        let slots = candidates.len() + 2 - q;

        for k in 0..slots {
            let j = candidates[k];
            st.rest.clear();
            if self.config.elimination {
                st.rest.extend_from_slice(&candidates[k + 1..]);
            } else {
                st.rest.extend((0..n).filter(|&h| h != root && h != j));
            }
            st.refs.clear();
            st.refs
                .extend(set_bits(self.table.row(root, p, j)).map(|w| (j, w)));
            for idx in 0..st.refs.len() {
                let r = st.refs[idx];
                if !self.pair(st, x0, r, sink) {
                    return false;
                }
            }
        }
        true
    }
}

impl<E: Engine> PairSearch<'_, E> {
    fn pair(
        &self,
        st: &mut PairScratch<E::State>,
        x0: (usize, usize),
        r: (usize, usize),
        sink: &mut Sink,
    ) -> bool {
        let inst = self.inst;
        let l = inst.l();
        let threshold = inst.q() - 2;
        let x0_codes = inst.sequence(x0.0).window(x0.1, l);
        let r_codes = inst.sequence(r.0).window(r.1, l);

        // Initial rows: windows within 2d of both x0 and r.
        st.ws.begin();
        if threshold > 0 {
            let words = self.table.row_words();
            for &h in &st.rest {
                let a = self.table.row(x0.0, x0.1, h);
                let b = self.table.row(r.0, r.1, h);
                st.ws.push_row(
                    h,
                    (0..words).flat_map(|i| {
                        let mut w = a[i] & b[i];
                        std::iter::from_fn(move || {
                            if w == 0 {
                                return None;
                            }
                            let bit = w.trailing_zeros() as usize;
                            w &= w - 1;
                            Some((i * 64 + bit) as u32)
                        })
                    }),
                );
            }
            st.ws.finish();
            if st.ws.live() < threshold {
                return true;
            }
        }

        st.order.clear();
        if self.config.position_reordering {
            st.order.extend_from_slice(
                PositionPermutation::differing_first(x0_codes, r_codes).as_slice(),
            );
        } else {
            st.order.extend(0..l);
        }
        st.diff_prefix.clear();
        st.diff_prefix.push(0);
        for slot in 0..l {
            let pos = st.order[slot];
            let last = *st.diff_prefix.last().expect("non-empty");
            st.diff_prefix
                .push(last + usize::from(x0_codes[pos] != r_codes[pos]));
        }
        self.engine.begin_pair(&mut st.engine, x0, r, &st.order);
        st.levels.clear();

        let order = std::mem::take(&mut st.order);
        let mut visitor = PairVisitor {
            search: self,
            st,
            sink,
            threshold,
            x0: x0_codes,
            r: r_codes,
            xr: mismatches(x0_codes, r_codes),
        };
        let completed =
            traverse_tree_ordered(x0_codes, inst.d(), inst.sigma(), &order, &mut visitor);
        visitor.st.order = order;
        completed
    }
}

struct PairVisitor<'s, 'a, E: Engine> {
    search: &'s PairSearch<'a, E>,
    st: &'s mut PairScratch<E::State>,
    sink: &'s mut Sink,
    threshold: usize,
    x0: &'a [u8],
    r: &'a [u8],
    xr: usize,
}

impl<E: Engine> PairVisitor<'_, '_, E> {
    fn undo(&mut self, node: &NeighborhoodNode<'_>, filtered: bool) {
        if filtered {
            self.st.ws.pop();
        }
        self.st.levels.pop();
        if let Some(c) = node.change {
            self.search
                .engine
                .set(&mut self.st.engine, c.position, c.old);
        }
    }
}

impl<E: Engine> TreeVisitor for PairVisitor<'_, '_, E> {
    fn enter(&mut self, node: &NeighborhoodNode<'_>) -> Visit {
        let inst = self.search.inst;
        let rule = self.search.config.rule;
        let d = inst.d() as isize;
        let h = node.level;
        let level = match node.change {
            None => Level {
                prefix_len: 0,
                pre_tr: 0,
                tr: self.xr,
                mixed: self.xr,
            },
            Some(c) => {
                let parent = *self.st.levels.last().expect("parent level");
                let r_at = self.r[c.position];
                let new_miss = usize::from(c.new != r_at);
                Level {
                    prefix_len: c.slot + 1,
                    pre_tr: parent.pre_tr + self.st.diff_prefix[c.slot]
                        - self.st.diff_prefix[parent.prefix_len]
                        + new_miss,
                    tr: parent.tr + new_miss - usize::from(c.old != r_at),
                    mixed: parent.mixed + usize::from(self.x0[c.position] == r_at),
                }
            }
        };
        let remaining = d - h as isize;
        let suf_xr = self.xr - self.st.diff_prefix[level.prefix_len];
        let feasible = match rule {
            Rule::Whole => {
                balls_intersect_counts(level.tr, self.xr, h, level.mixed, remaining, d, d)
            }
            Rule::PrefixFixed => two_balls_intersect(suf_xr, remaining, d - level.pre_tr as isize),
        };
        if !feasible {
            return Visit::Prune;
        }
        if !self.sink.visit() {
            return Visit::Abort;
        }

        self.st.levels.push(level);
        let engine = &self.search.engine;
        if let Some(c) = node.change {
            engine.set(&mut self.st.engine, c.position, c.new);
        }
        engine.set_prefix(&mut self.st.engine, level.prefix_len);

        let filtered = self.threshold > 0;
        if filtered {
            let est = &self.st.engine;
            let kept = match rule {
                Rule::Whole => self.st.ws.push_filtered(self.threshold, |seq, w| {
                    let s = engine.whole_stats(est, seq, w as usize);
                    balls_intersect_counts(level.tr, s.ry, s.ty, s.mixed, remaining, d, d)
                }),
                Rule::PrefixFixed => {
                    let r_radius = d - level.pre_tr as isize;
                    self.st.ws.push_filtered(self.threshold, |seq, w| {
                        let s = engine.prefix_stats(est, seq, w as usize);
                        balls_intersect_counts(
                            suf_xr,
                            s.suf_ry,
                            s.suf_xy,
                            s.suf_mixed,
                            remaining,
                            r_radius,
                            d - s.pre_ty as isize,
                        )
                    })
                }
            };
            if !kept {
                self.undo(node, false);
                return Visit::Prune;
            }
        }

        if level.tr as isize <= d && !self.sink.already_found(node.candidate) {
            let dd = inst.d();
            let est = &self.st.engine;
            let hits = self
                .st
                .ws
                .rows()
                .filter(|(seq, windows)| {
                    windows
                        .iter()
                        .any(|&w| engine.node_distance(est, *seq, w as usize) <= dd)
                })
                .take(self.threshold)
                .count();
            if !filtered || hits >= self.threshold {
                self.sink.verified += 1;
                let support = engine.support(est, node.candidate);
                debug_assert_eq!(support, support_plain(inst, node.candidate));
                if support >= inst.q() {
                    self.sink.emit(node.candidate, support);
                }
            }
        }

        if h < inst.d() {
            Visit::Descend
        } else {
            self.undo(node, filtered);
            Visit::Prune
        }
    }

    fn leave(&mut self, node: &NeighborhoodNode<'_>) {
        let filtered = self.threshold > 0;
        self.undo(node, filtered);
    }
}

//! Bit-plane packed l-mers and Hamming distance.
//!
//! A packed l-mer stores ⌈log₂ σ⌉ planes of ⌈l/32⌉ 32-bit words. Bit `j % 32`
//! of word `j / 32` in plane `b` is bit `b` of the code at position `j`.
//! Two l-mers differ at `j` iff any plane differs at `j`, so the distance is
//! the popcount of the OR over planes of the per-plane XOR.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::model::{Instance, Lmer, Sequence};

pub const WORD_BITS: usize = 32;

/// Words per plane for an l-mer of length `l`.
pub fn words_for(l: usize) -> usize {
    l.div_ceil(WORD_BITS)
}

#[inline]
pub fn popcount(w: u32) -> u32 {
    w.count_ones()
}

/// Table-free SWAR bit count; must agree with [`popcount`].
pub fn popcount_portable(mut w: u32) -> u32 {
    w = w - ((w >> 1) & 0x5555_5555);
    w = (w & 0x3333_3333) + ((w >> 2) & 0x3333_3333);
    w = (w + (w >> 4)) & 0x0f0f_0f0f;
    w.wrapping_mul(0x0101_0101) >> 24
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompressedLmer {
    l: usize,
    planes: usize,
    /// Plane-major: `words[plane * words_for(l) + word]`.
    words: Vec<u32>,
}

impl CompressedLmer {
    pub fn len(&self) -> usize {
        self.l
    }

    pub fn is_empty(&self) -> bool {
        self.l == 0
    }

    pub fn planes(&self) -> usize {
        self.planes
    }

    pub fn words_per_plane(&self) -> usize {
        words_for(self.l)
    }

    pub fn words(&self) -> &[u32] {
        &self.words
    }

    pub fn plane(&self, b: usize) -> &[u32] {
        let wpp = self.words_per_plane();
        &self.words[b * wpp..(b + 1) * wpp]
    }

    pub fn decompress(&self) -> Lmer {
        let wpp = self.words_per_plane();
        Lmer::new(unpack_into(&self.words, self.l, self.planes, wpp))
    }

    /// Overwrites the symbol at `pos`.
    pub fn set(&mut self, pos: usize, code: u8) {
        let wpp = self.words_per_plane();
        set_symbol(&mut self.words, self.planes, wpp, pos, code);
    }
}

pub fn compress_lmer(x: &Lmer, bits_per_symbol: usize) -> CompressedLmer {
    compress_codes(x.codes(), bits_per_symbol)
}

pub fn compress_codes(codes: &[u8], bits_per_symbol: usize) -> CompressedLmer {
    let l = codes.len();
    let wpp = words_for(l);
    let mut words = vec![0u32; bits_per_symbol * wpp];
    pack_into(codes, bits_per_symbol, wpp, &mut words);
    CompressedLmer {
        l,
        planes: bits_per_symbol,
        words,
    }
}

fn pack_into(codes: &[u8], planes: usize, wpp: usize, out: &mut [u32]) {
    for (j, &c) in codes.iter().enumerate() {
        let (w, bit) = (j / WORD_BITS, j % WORD_BITS);
        for b in 0..planes {
            out[b * wpp + w] |= (((c >> b) & 1) as u32) << bit;
        }
    }
}

fn unpack_into(words: &[u32], l: usize, planes: usize, wpp: usize) -> Vec<u8> {
    (0..l)
        .map(|j| {
            let (w, bit) = (j / WORD_BITS, j % WORD_BITS);
            (0..planes).fold(0u8, |acc, b| {
                acc | ((((words[b * wpp + w] >> bit) & 1) as u8) << b)
            })
        })
        .collect()
}

#[inline]
pub(crate) fn set_symbol(words: &mut [u32], planes: usize, wpp: usize, pos: usize, code: u8) {
    let (w, bit) = (pos / WORD_BITS, pos % WORD_BITS);
    for b in 0..planes {
        let slot = &mut words[b * wpp + w];
        *slot = (*slot & !(1 << bit)) | ((((code >> b) & 1) as u32) << bit);
    }
}

#[inline]
pub(crate) fn packed_distance(a: &[u32], b: &[u32], planes: usize, wpp: usize) -> usize {
    let mut total = 0;
    for w in 0..wpp {
        let mut acc = 0;
        for p in 0..planes {
            acc |= a[p * wpp + w] ^ b[p * wpp + w];
        }
        total += popcount(acc) as usize;
    }
    total
}

pub fn hamming_compressed(a: &CompressedLmer, b: &CompressedLmer) -> Result<usize> {
    if a.l != b.l {
        return Err(Error::LengthMismatch {
            left: a.l,
            right: b.l,
        });
    }
    if a.planes != b.planes {
        return Err(Error::LengthMismatch {
            left: a.planes,
            right: b.planes,
        });
    }
    Ok(packed_distance(
        &a.words,
        &b.words,
        a.planes,
        a.words_per_plane(),
    ))
}

/// Mismatch count of two equal-length code slices.
#[inline]
pub fn mismatches(a: &[u8], b: &[u8]) -> usize {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

pub fn hamming_naive(a: &Lmer, b: &Lmer) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(mismatches(a.codes(), b.codes()))
}

/// Minimum distance from `x` to any l-mer window of `s`.
pub fn hamming_to_sequence(x: &Lmer, s: &Sequence) -> Result<usize> {
    if x.len() > s.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: s.len(),
        });
    }
    Ok(min_window_distance(x.codes(), s.codes()))
}

pub(crate) fn min_window_distance(x: &[u8], s: &[u8]) -> usize {
    s.windows(x.len())
        .map(|w| mismatches(x, w))
        .min()
        .unwrap_or(usize::MAX)
}

/// Distance from `x` to the window of `s` at `start`; `None` stands for the
/// infinite distance of a window running past either end of `s`.
pub fn window_distance(x: &[u8], s: &[u8], start: isize) -> Option<usize> {
    if start < 0 || start as usize + x.len() > s.len() {
        return None;
    }
    let start = start as usize;
    Some(mismatches(x, &s[start..start + x.len()]))
}

/// Applies the change `t[pos]: old → new` to per-window distances of `t`
/// against `s`, where `dists[r]` is the distance to the window at `r`.
pub fn incremental_update(dists: &mut [u16], pos: usize, old: u8, new: u8, s: &[u8]) {
    update_and_min(dists, pos, old, new, s);
}

/// [`incremental_update`] that also returns the new minimum (`u16::MAX` for
/// an empty slice).
#[inline]
pub(crate) fn update_and_min(dists: &mut [u16], pos: usize, old: u8, new: u8, s: &[u8]) -> u16 {
    let column = &s[pos..pos + dists.len()];
    let mut min = u16::MAX;
    for (dist, &c) in dists.iter_mut().zip(column) {
        *dist = dist
            .wrapping_add(u16::from(c == old))
            .wrapping_sub(u16::from(c == new));
        min = min.min(*dist);
    }
    min
}

/// All l-mer windows of every sequence of an instance, packed back to back.
#[derive(Debug, Clone)]
pub struct PackedWindows {
    planes: usize,
    wpp: usize,
    windows: usize,
    data: Vec<u32>,
}

impl PackedWindows {
    pub fn new(inst: &Instance) -> Self {
        let planes = inst.alphabet().bits_per_symbol();
        let l = inst.l();
        let wpp = words_for(l);
        let windows = inst.windows();
        let stride = planes * wpp;
        let mut data = vec![0u32; inst.n() * windows * stride];
        for (i, s) in inst.sequences().iter().enumerate() {
            for w in 0..windows {
                let off = (i * windows + w) * stride;
                pack_into(s.window(w, l), planes, wpp, &mut data[off..off + stride]);
            }
        }
        PackedWindows {
            planes,
            wpp,
            windows,
            data,
        }
    }

    pub fn planes(&self) -> usize {
        self.planes
    }

    pub fn words_per_plane(&self) -> usize {
        self.wpp
    }

    #[inline]
    pub fn window(&self, seq: usize, w: usize) -> &[u32] {
        let stride = self.planes * self.wpp;
        let off = (seq * self.windows + w) * stride;
        &self.data[off..off + stride]
    }

    #[inline]
    pub fn distance(&self, a: (usize, usize), b: (usize, usize)) -> usize {
        packed_distance(
            self.window(a.0, a.1),
            self.window(b.0, b.1),
            self.planes,
            self.wpp,
        )
    }
}

/// "Distance ≤ 2d" flags for every pair of windows across two sequences.
/// Rows are built on first use for each ordered sequence pair.
#[derive(Debug)]
pub struct PairDistanceTable {
    n: usize,
    windows: usize,
    limit: usize,
    row_words: usize,
    packed: PackedWindows,
    cells: Vec<OnceLock<Vec<u64>>>,
}

pub fn precompute_pair_distances(inst: &Instance) -> PairDistanceTable {
    let n = inst.n();
    let windows = inst.windows();
    PairDistanceTable {
        n,
        windows,
        limit: 2 * inst.d(),
        row_words: windows.div_ceil(64),
        packed: PackedWindows::new(inst),
        cells: (0..n * n).map(|_| OnceLock::new()).collect(),
    }
}

impl PairDistanceTable {
    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn row_words(&self) -> usize {
        self.row_words
    }

    /// Packed windows the flags were computed from.
    pub fn packed(&self) -> &PackedWindows {
        &self.packed
    }

    fn block(&self, i: usize, j: usize) -> &[u64] {
        self.cells[i * self.n + j].get_or_init(|| {
            let mut bits = vec![0u64; self.windows * self.row_words];
            for p in 0..self.windows {
                let row = &mut bits[p * self.row_words..(p + 1) * self.row_words];
                for r in 0..self.windows {
                    if self.packed.distance((i, p), (j, r)) <= self.limit {
                        row[r / 64] |= 1 << (r % 64);
                    }
                }
            }
            bits
        })
    }

    /// Bitset over the windows of sequence `j` that lie within 2d of window
    /// `p` of sequence `i`.
    pub fn row(&self, i: usize, p: usize, j: usize) -> &[u64] {
        &self.block(i, j)[p * self.row_words..(p + 1) * self.row_words]
    }

    pub fn flag(&self, i: usize, p: usize, j: usize, r: usize) -> bool {
        self.row(i, p, j)[r / 64] >> (r % 64) & 1 == 1
    }

    /// Number of sequence pairs whose rows have been built so far.
    pub fn materialized(&self) -> usize {
        self.cells.iter().filter(|c| c.get().is_some()).count()
    }
}

//! d-neighborhoods: ball sizes and enumeration, the duplicate-free
//! neighborhood tree, position classes of string triples and the
//! three-ball intersection test.

use crate::bitpack::mismatches;
use crate::error::{Error, Result};
use crate::model::Lmer;

/// n_B(l, d) = Σ_{i ≤ d} C(l, i)·(σ − 1)^i.
pub fn ball_size(l: usize, d: usize, sigma: usize) -> Result<u128> {
    if d > l {
        return Err(Error::BadParams(format!("radius {d} exceeds length {l}")));
    }
    if sigma < 2 {
        return Err(Error::BadParams(
            "alphabet needs at least two symbols".into(),
        ));
    }
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    let mut power: u128 = 1;
    let base = (sigma - 1) as u128;
    for i in 0..=d {
        if i > 0 {
            binom = binom
                .checked_mul((l - i + 1) as u128)
                .ok_or(Error::Overflow)?
                / i as u128;
            power = power.checked_mul(base).ok_or(Error::Overflow)?;
        }
        let term = binom.checked_mul(power).ok_or(Error::Overflow)?;
        total = total.checked_add(term).ok_or(Error::Overflow)?;
    }
    Ok(total)
}

/// Every string within distance `radius` of `x`, in code order.
pub fn ball_enumerate(x: &Lmer, radius: usize, sigma: usize) -> Vec<Lmer> {
    fn rec(x: &[u8], pos: usize, budget: usize, sigma: u8, cur: &mut Vec<u8>, out: &mut Vec<Lmer>) {
        if pos == x.len() {
            out.push(Lmer::new(cur.clone()));
            return;
        }
        for c in 0..sigma {
            let cost = usize::from(c != x[pos]);
            if cost <= budget {
                cur.push(c);
                rec(x, pos + 1, budget - cost, sigma, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(
        x.codes(),
        0,
        radius,
        sigma as u8,
        &mut Vec::with_capacity(x.len()),
        &mut out,
    );
    out
}

/// What a tree visitor wants done with the node it was just shown.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Visit {
    Descend,
    Prune,
    Abort,
}

/// The single-symbol change that produced a node from its parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Change {
    /// Index into the traversal's position order.
    pub slot: usize,
    pub position: usize,
    /// The root's symbol at `position` (every ancestor still has it).
    pub old: u8,
    pub new: u8,
}

/// A node of T_d(x): `candidate` is at distance `level` from the root.
#[derive(Debug, Clone, Copy)]
pub struct NeighborhoodNode<'a> {
    pub candidate: &'a [u8],
    pub level: usize,
    /// `None` at the root.
    pub change: Option<Change>,
}

impl NeighborhoodNode<'_> {
    /// Slots `< prefix_len()` of the position order are fixed for every
    /// descendant of this node.
    pub fn prefix_len(&self) -> usize {
        self.change.map_or(0, |c| c.slot + 1)
    }
}

pub trait TreeVisitor {
    fn enter(&mut self, node: &NeighborhoodNode<'_>) -> Visit;

    /// Called after the subtree of a node whose `enter` returned `Descend`.
    fn leave(&mut self, _node: &NeighborhoodNode<'_>) {}
}

impl<F: FnMut(&NeighborhoodNode<'_>) -> Visit> TreeVisitor for F {
    fn enter(&mut self, node: &NeighborhoodNode<'_>) -> Visit {
        self(node)
    }
}

/// Depth-first traversal of T_d(x) with positions in ascending order.
/// Returns `false` if the visitor aborted.
pub fn traverse_tree<V: TreeVisitor + ?Sized>(
    x: &[u8],
    d: usize,
    sigma: usize,
    visitor: &mut V,
) -> bool {
    let order: Vec<usize> = (0..x.len()).collect();
    traverse_tree_ordered(x, d, sigma, &order, visitor)
}

/// Depth-first traversal of T_d(x) where children of a node change one
/// position that comes later in `order` than the node's own change, to a
/// symbol other than the root's. Replacement symbols are tried in code order.
pub fn traverse_tree_ordered<V: TreeVisitor + ?Sized>(
    x: &[u8],
    d: usize,
    sigma: usize,
    order: &[usize],
    visitor: &mut V,
) -> bool {
    debug_assert_eq!(order.len(), x.len());
    let mut cand = x.to_vec();
    let root = NeighborhoodNode {
        candidate: x,
        level: 0,
        change: None,
    };
    match visitor.enter(&root) {
        Visit::Abort => return false,
        Visit::Prune => return true,
        Visit::Descend => {}
    }
    let completed = descend(x, &mut cand, 0, 0, d, sigma as u8, order, visitor);
    if completed {
        visitor.leave(&root);
    }
    completed
}

#[allow(clippy::too_many_arguments)]
fn descend<V: TreeVisitor + ?Sized>(
    root: &[u8],
    cand: &mut [u8],
    level: usize,
    first_slot: usize,
    d: usize,
    sigma: u8,
    order: &[usize],
    visitor: &mut V,
) -> bool {
    if level >= d {
        return true;
    }
    for slot in first_slot..order.len() {
        let position = order[slot];
        let old = root[position];
        for new in 0..sigma {
            if new == old {
                continue;
            }
            cand[position] = new;
            let change = Some(Change {
                slot,
                position,
                old,
                new,
            });
            let node = NeighborhoodNode {
                candidate: cand,
                level: level + 1,
                change,
            };
            match visitor.enter(&node) {
                Visit::Abort => {
                    cand[position] = old;
                    return false;
                }
                Visit::Prune => {}
                Visit::Descend => {
                    if !descend(root, cand, level + 1, slot + 1, d, sigma, order, visitor) {
                        cand[position] = old;
                        return false;
                    }
                    let node = NeighborhoodNode {
                        candidate: cand,
                        level: level + 1,
                        change,
                    };
                    visitor.leave(&node);
                }
            }
        }
        cand[position] = old;
    }
    true
}

/// The equality pattern of three strings, position by position (0-based).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PositionClasses {
    /// a = b = c
    pub r1: Vec<usize>,
    /// a = b ≠ c
    pub r2: Vec<usize>,
    /// c = a ≠ b
    pub r3: Vec<usize>,
    /// b = c ≠ a
    pub r4: Vec<usize>,
    /// all pairwise distinct
    pub r5: Vec<usize>,
}

impl PositionClasses {
    /// |R2| + |R3| + |R4| + |R5|.
    pub fn non_uniform(&self) -> usize {
        self.r2.len() + self.r3.len() + self.r4.len() + self.r5.len()
    }
}

pub fn position_classes(a: &[u8], b: &[u8], c: &[u8]) -> Result<PositionClasses> {
    check_lengths(a, b, c)?;
    let mut out = PositionClasses::default();
    for j in 0..a.len() {
        let class = match (a[j] == b[j], b[j] == c[j], c[j] == a[j]) {
            (true, true, _) => &mut out.r1,
            (true, false, _) => &mut out.r2,
            (false, _, true) => &mut out.r3,
            (false, true, false) => &mut out.r4,
            (false, false, false) => &mut out.r5,
        };
        class.push(j);
    }
    Ok(out)
}

fn check_lengths(a: &[u8], b: &[u8], c: &[u8]) -> Result<()> {
    for other in [b, c] {
        if other.len() != a.len() {
            return Err(Error::LengthMismatch {
                left: a.len(),
                right: other.len(),
            });
        }
    }
    Ok(())
}

/// B(a, d_a) ∩ B(b, d_b) ∩ B(c, d_c) ≠ ∅, decided from the pairwise
/// distances and the count of positions where the three strings are not all
/// equal.
///
/// Any center pays at least 1 at a position of R2..R4 and at least 2 at a
/// position of R5, so the radii must cover |R2| + |R3| + |R4| + 2|R5|, which
/// is `ab + bc + ca - non_uniform`. Over a binary alphabet R5 is empty and
/// this is the plain non-uniform count.
#[inline]
pub fn balls_intersect_counts(
    ab: usize,
    bc: usize,
    ca: usize,
    non_uniform: usize,
    da: isize,
    db: isize,
    dc: isize,
) -> bool {
    da >= 0
        && db >= 0
        && dc >= 0
        && da + db >= ab as isize
        && db + dc >= bc as isize
        && dc + da >= ca as isize
        && da + db + dc >= ab as isize + bc as isize + ca as isize - non_uniform as isize
}

/// B(a, d_a) ∩ B(b, d_b) ≠ ∅.
#[inline]
pub fn two_balls_intersect(ab: usize, da: isize, db: isize) -> bool {
    da >= 0 && db >= 0 && da + db >= ab as isize
}

pub fn balls_intersect(
    a: &[u8],
    da: isize,
    b: &[u8],
    db: isize,
    c: &[u8],
    dc: isize,
) -> Result<bool> {
    check_lengths(a, b, c)?;
    let ab = mismatches(a, b);
    let bc = mismatches(b, c);
    let ca = mismatches(c, a);
    let non_uniform = (0..a.len())
        .filter(|&j| !(a[j] == b[j] && b[j] == c[j]))
        .count();
    Ok(balls_intersect_counts(ab, bc, ca, non_uniform, da, db, dc))
}

/// A bijection on positions `0..l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionPermutation {
    perm: Vec<usize>,
}

impl PositionPermutation {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::BadParams(format!("{perm:?} is not a permutation")));
            }
        }
        Ok(PositionPermutation { perm })
    }

    pub fn identity(l: usize) -> Self {
        PositionPermutation {
            perm: (0..l).collect(),
        }
    }

    /// Positions where `a` and `b` differ, then positions where they agree,
    /// each group ascending.
    pub fn differing_first(a: &[u8], b: &[u8]) -> Self {
        let (mut diff, same): (Vec<usize>, Vec<usize>) = (0..a.len()).partition(|&j| a[j] != b[j]);
        diff.extend(same);
        PositionPermutation { perm: diff }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }
}

/// x|_P for an arbitrary position vector: `out[j] = x[positions[j]]`.
pub fn restrict(x: &Lmer, positions: &[usize]) -> Lmer {
    Lmer::new(positions.iter().map(|&p| x.codes()[p]).collect())
}

pub fn reorder_positions(x: &Lmer, perm: &PositionPermutation) -> Result<Lmer> {
    if x.len() != perm.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: perm.len(),
        });
    }
    Ok(restrict(x, perm.as_slice()))
}

pub fn inverse_reorder(y: &Lmer, perm: &PositionPermutation) -> Result<Lmer> {
    if y.len() != perm.len() {
        return Err(Error::LengthMismatch {
            left: y.len(),
            right: perm.len(),
        });
    }
    let mut out = vec![0u8; y.len()];
    for (j, &p) in perm.as_slice().iter().enumerate() {
        out[p] = y.codes()[j];
    }
    Ok(Lmer::new(out))
}

//! Verification of sequencings, block-type counts and the closed-form
//! existence / nonexistence bounds.
//!
//! All bound arithmetic is exact integer arithmetic.

use thiserror::Error;

use crate::design::{admissible_order, Block, DesignError, Permutation, SteinerTripleSystem};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("permutation has {found} entries, system has {v} points")]
    NotAPermutation { v: usize, found: usize },
    #[error("window length must be at least 3, got {0}")]
    InvalidEll(usize),
    #[error("index {i} outside 1..={max}")]
    IndexOutOfRange { i: usize, max: usize },
    #[error(transparent)]
    Design(#[from] DesignError),
}

/// A block sitting inside some window of `ell` consecutive positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub block: Block,
    /// 0-based position of the block's leftmost point.
    pub window_start: usize,
    /// Distance between the leftmost and rightmost positions of the block.
    pub spread: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Good,
    Bad(Witness),
}

impl Verdict {
    pub fn is_good(&self) -> bool {
        matches!(self, Verdict::Good)
    }
}

fn check_ell(ell: usize) -> Result<(), AnalysisError> {
    if ell < 3 {
        Err(AnalysisError::InvalidEll(ell))
    } else {
        Ok(())
    }
}

fn check_perm(sts: &SteinerTripleSystem, perm: &Permutation) -> Result<(), AnalysisError> {
    if perm.len() != sts.order() {
        return Err(AnalysisError::NotAPermutation {
            v: sts.order(),
            found: perm.len(),
        });
    }
    Ok(())
}

/// Decides whether `perm` is an `ell`-good sequencing of `sts`.
///
/// A block lies inside `ell` consecutive positions exactly when the distance
/// between its outermost positions is below `ell`, so one pass over the
/// blocks suffices. The first offending block (in block order) is returned
/// as the witness.
pub fn is_ell_good(
    sts: &SteinerTripleSystem,
    perm: &Permutation,
    ell: usize,
) -> Result<Verdict, AnalysisError> {
    check_ell(ell)?;
    check_perm(sts, perm)?;
    let pos = perm.positions();
    for &block in sts.blocks() {
        let [a, b, c] = block.points().map(|p| pos[p as usize]);
        let lo = a.min(b).min(c);
        let hi = a.max(b).max(c);
        if hi - lo < ell {
            return Ok(Verdict::Bad(Witness {
                block,
                window_start: lo,
                spread: hi - lo,
            }));
        }
    }
    Ok(Verdict::Good)
}

/// Block counts by how many points they share with the first `ell`
/// sequenced points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TypeCounts {
    pub b0: u64,
    pub b1: u64,
    pub b2: u64,
    pub b3: u64,
}

impl TypeCounts {
    pub fn total(&self) -> u64 {
        self.b0 + self.b1 + self.b2 + self.b3
    }
}

pub fn type_counts(
    sts: &SteinerTripleSystem,
    perm: &Permutation,
    ell: usize,
) -> Result<TypeCounts, AnalysisError> {
    check_ell(ell)?;
    check_perm(sts, perm)?;
    let pos = perm.positions();
    let mut counts = TypeCounts::default();
    for block in sts.blocks() {
        let hits = block
            .points()
            .iter()
            .filter(|&&p| pos[p as usize] < ell)
            .count();
        match hits {
            0 => counts.b0 += 1,
            1 => counts.b1 += 1,
            2 => counts.b2 += 1,
            _ => counts.b3 += 1,
        }
    }
    Ok(counts)
}

/// The counts every `ell`-good sequencing of an STS(`v`) must have:
/// `b2 = C(ell,2)`, `b1 = ell((v-1)/2 - (ell-1))`,
/// `b0 = v(v-1)/6 - ell(v-ell)/2`, `b3 = 0`.
///
/// Returns `None` when any of these is negative, in which case no
/// `ell`-good sequencing exists.
pub fn expected_type_counts(v: usize, ell: usize) -> Option<TypeCounts> {
    let (v, l) = (v as i64, ell as i64);
    let b2 = l * (l - 1) / 2;
    let b1 = l * ((v - 1) / 2 - (l - 1));
    let b0 = v * (v - 1) / 6 - l * (v - l) / 2;
    if b0 < 0 || b1 < 0 {
        return None;
    }
    Some(TypeCounts {
        b0: b0 as u64,
        b1: b1 as u64,
        b2: b2 as u64,
        b3: 0,
    })
}

/// The largest `ell` for which an STS(`v`) is not ruled out by the counting
/// argument: `floor((v+2)/3)`, lowered by one when `v = 3*ell - 2` with
/// `ell` odd and greater than 3.
pub fn nonexistence_ceiling(v: usize) -> Result<usize, AnalysisError> {
    if !admissible_order(v) || v < 7 {
        return Err(DesignError::InvalidOrder(v).into());
    }
    let ell = v.div_ceil(3);
    if (v + 2).is_multiple_of(3) && ell % 2 == 1 && ell > 3 {
        Ok(ell - 1)
    } else {
        Ok(ell)
    }
}

/// Number of forced swaps, `C(ell-1, 2)`.
pub fn swap_count(ell: usize) -> usize {
    (ell - 1) * (ell - 2) / 2
}

/// Number of position pairs `(j1, j2)` at distance at most `ell-1` inside
/// the `|T_i| = i + 2*ell - 2` positions around core `i` (`ell` positions and
/// all `C(ell,2)` pairs for `i = 1`).
pub fn j_size(ell: usize, i: usize) -> Result<u64, AnalysisError> {
    check_ell(ell)?;
    let max = swap_count(ell);
    if i < 1 || i > max {
        return Err(AnalysisError::IndexOutOfRange { i, max });
    }
    let (l, i) = (ell as u64, i as u64);
    if i == 1 {
        Ok(l * (l - 1) / 2)
    } else {
        // (l-1)(i + (3l-4)/2), kept integral
        Ok((l - 1) * (2 * i + 3 * l - 4) / 2)
    }
}

/// Exact length of an overflow holding `m` pinned points: an initial run of
/// `ell-2` free slots, then the points separated by `(ell-2)/2` free slots
/// (even `ell`) or alternately `(ell-3)/2` and `(ell-1)/2` (odd `ell`).
pub fn overflow_capacity(ell: usize, m: u64) -> u64 {
    if m == 0 {
        return 0;
    }
    let l = ell as u64;
    if l.is_multiple_of(2) || m % 2 == 1 {
        l * (m + 1) / 2 - 1
    } else {
        (l * (m + 1) - 3) / 2
    }
}

/// Minimum gap between the last overflow and the tail.
pub fn gap_min(ell: usize) -> usize {
    if ell.is_multiple_of(2) {
        ell - 2
    } else {
        ell - 1
    }
}

/// `ceil((ell-1)(ell^5 - 9 ell^3 + 20 ell^2 - 36 ell + 16) / 16)`.
pub fn general_bound(ell: usize) -> u128 {
    let l = ell as i128;
    let poly = l.pow(5) - 9 * l.pow(3) + 20 * l.pow(2) - 36 * l + 16;
    let num = (l - 1) * poly;
    // num > 0 for ell >= 3
    ((num + 15) / 16) as u128
}

/// Sum of worst-case component lengths: segments (buffers, cores, overflows
/// at capacity), the minimum gap and the tail.
pub fn refined_bound(ell: usize) -> u128 {
    let big_l = swap_count(ell);
    let buf = (ell - 1) as u128;
    let cap = |i: usize| overflow_capacity(ell, j_size(ell, i).expect("i in range")) as u128;
    let mut total = 1 + buf + cap(1);
    for i in 2..=big_l {
        total += buf + i as u128 + buf + cap(i);
    }
    total + gap_min(ell) as u128 + big_l as u128
}

/// Bounds for one window length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundReport {
    pub ell: usize,
    pub general_bound: u128,
    pub refined_bound: u128,
}

impl BoundReport {
    pub fn new(ell: usize) -> Result<Self, AnalysisError> {
        check_ell(ell)?;
        Ok(BoundReport {
            ell,
            general_bound: general_bound(ell),
            refined_bound: refined_bound(ell),
        })
    }

    /// See [`nonexistence_ceiling`].
    pub fn ceiling(v: usize) -> Result<usize, AnalysisError> {
        nonexistence_ceiling(v)
    }
}

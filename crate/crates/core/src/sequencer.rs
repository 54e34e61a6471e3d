//! Construction of `ell`-good sequencings by segmented greedy filling
//! followed by a bounded swap phase.
//!
//! The sequence is laid out left to right as
//!
//! ```text
//! S_1 S_2 ... S_L  G  tail
//! S_i = left buffer | core | right buffer | overflow
//! ```
//!
//! with `L = C(ell-1, 2)`. Buffers and cores are filled greedily. For every
//! pair of nearby positions around core `i`, the third point of its block is
//! pinned into the overflow at a spacing that keeps any three pinned points
//! out of a common window; the free overflow slots are then filled by a
//! greedy rule that also looks at pinned points ahead. The gap `G` is filled
//! greedily and the `L` leftover points go into the tail. Each tail slot
//! `i` then takes a permissible value, swapping with a later leftover or
//! with a point from core `i` if needed.
//!
//! All positions in this module are 0-based.

use std::ops::Range;

use thiserror::Error;

use crate::analysis::{self, gap_min, j_size, overflow_capacity, refined_bound, AnalysisError, Verdict, Witness};
use crate::design::{Permutation, Point, SteinerTripleSystem};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SequenceError {
    #[error("window length must be at least 3, got {0}")]
    InvalidEll(usize),
    #[error("order {v} is below the guaranteed minimum {required}{}", position_note(*.position))]
    OrderTooSmall {
        v: usize,
        required: u128,
        position: Option<usize>,
    },
    #[error("position {position} in the window is not filled")]
    UnfilledWindow { position: usize },
    #[error("position {position} is already occupied")]
    SlotOccupied { position: usize },
    #[error("no permissible point left for position {position}")]
    GreedyStuck { position: usize },
    #[error("no permissible value for tail slot {index}")]
    SwapExhausted { index: usize },
    #[error("core swap {index} created a block in the window starting at {window_start}")]
    UnsafeSwap { index: usize, window_start: usize },
    #[error("result is not good: block {} at position {}", .0.block, .0.window_start)]
    NotGood(Witness),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

fn position_note(position: Option<usize>) -> String {
    match position {
        Some(p) => format!(" (ran out of room at position {p})"),
        None => String::new(),
    }
}

/// Window length and the derived number of tail swaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SequencingParams {
    ell: usize,
    swaps: usize,
}

impl SequencingParams {
    pub fn new(ell: usize) -> Result<Self, SequenceError> {
        if ell < 3 {
            return Err(SequenceError::InvalidEll(ell));
        }
        Ok(SequencingParams {
            ell,
            swaps: analysis::swap_count(ell),
        })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// `L = C(ell-1, 2)`: number of segments, tail length and largest core.
    pub fn swap_count(&self) -> usize {
        self.swaps
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentLayout {
    /// 1-based segment number; also the core length.
    pub index: usize,
    pub left_buffer: Range<usize>,
    pub core: Range<usize>,
    pub right_buffer: Range<usize>,
    pub overflow: Range<usize>,
    /// Positions inside `overflow` that hold pre-placed points.
    pub pinned: Vec<usize>,
}

impl SegmentLayout {
    /// The whole segment, left buffer through overflow.
    pub fn span(&self) -> Range<usize> {
        self.left_buffer.start..self.overflow.end
    }

    /// Buffers and core, the positions whose nearby pairs are protected.
    pub fn protected(&self) -> Range<usize> {
        self.left_buffer.start..self.right_buffer.end
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub v: usize,
    pub ell: usize,
    pub segments: Vec<SegmentLayout>,
    pub gap: Range<usize>,
    pub tail: Range<usize>,
}

/// Offsets, relative to the overflow start, of `m` pinned points.
pub fn overflow_offsets(ell: usize, m: usize) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(m);
    if m == 0 {
        return offsets;
    }
    let mut at = ell - 2;
    offsets.push(at);
    for k in 2..=m {
        let free = if ell.is_multiple_of(2) {
            (ell - 2) / 2
        } else if k % 2 == 0 {
            (ell - 3) / 2
        } else {
            (ell - 1) / 2
        };
        at += free + 1;
        offsets.push(at);
    }
    offsets
}

fn segment_skeleton(start: usize, index: usize, ell: usize) -> SegmentLayout {
    let left_len = if index == 1 { 0 } else { ell - 1 };
    let left_buffer = start..start + left_len;
    let core = left_buffer.end..left_buffer.end + index;
    let right_buffer = core.end..core.end + ell - 1;
    let overflow = right_buffer.end..right_buffer.end;
    SegmentLayout {
        index,
        left_buffer,
        core,
        right_buffer,
        overflow,
        pinned: Vec::new(),
    }
}

fn set_overflow(seg: &mut SegmentLayout, ell: usize, m: usize) {
    let start = seg.right_buffer.end;
    seg.pinned = overflow_offsets(ell, m).into_iter().map(|o| start + o).collect();
    let len = seg.pinned.last().map_or(0, |&p| p + 1 - start);
    seg.overflow = start..start + len;
}

/// Worst-case layout for order `v`: every overflow sized for the largest
/// possible number of pinned points, slack absorbed by the gap.
pub fn compute_layout(v: usize, params: SequencingParams) -> Result<Layout, SequenceError> {
    let ell = params.ell();
    let big_l = params.swap_count();
    let required = refined_bound(ell);
    if (v as u128) < required {
        return Err(SequenceError::OrderTooSmall {
            v,
            required,
            position: None,
        });
    }
    let mut segments = Vec::with_capacity(big_l);
    let mut cursor = 0;
    for i in 1..=big_l {
        let mut seg = segment_skeleton(cursor, i, ell);
        let m = j_size(ell, i)? as usize;
        set_overflow(&mut seg, ell, m);
        debug_assert_eq!(seg.overflow.len() as u64, overflow_capacity(ell, m as u64));
        cursor = seg.overflow.end;
        segments.push(seg);
    }
    let tail = v - big_l..v;
    let gap = cursor..tail.start;
    debug_assert!(gap.len() >= gap_min(ell));
    Ok(Layout {
        v,
        ell,
        segments,
        gap,
        tail,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Empty,
    Filled(Point),
    /// Pre-placed ahead of the fill frontier.
    Pinned(Point),
}

impl Slot {
    pub fn value(self) -> Option<Point> {
        match self {
            Slot::Empty => None,
            Slot::Filled(p) | Slot::Pinned(p) => Some(p),
        }
    }
}

/// A sequence under construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialSequencing {
    slots: Vec<Slot>,
    used: Vec<bool>,
}

impl PartialSequencing {
    pub fn new(v: usize) -> Self {
        PartialSequencing {
            slots: vec![Slot::Empty; v],
            used: vec![false; v + 1],
        }
    }

    /// Fills a prefix with `points`.
    pub fn from_prefix(v: usize, points: &[Point]) -> Result<Self, SequenceError> {
        let mut ps = Self::new(v);
        for (i, &p) in points.iter().enumerate() {
            ps.put(i, Slot::Filled(p))?;
        }
        Ok(ps)
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slot(&self, position: usize) -> Slot {
        self.slots[position]
    }

    pub fn value(&self, position: usize) -> Option<Point> {
        self.slots[position].value()
    }

    pub fn is_used(&self, point: Point) -> bool {
        self.used[point as usize]
    }

    /// Places or pins a point at an empty position.
    pub fn put(&mut self, position: usize, slot: Slot) -> Result<(), SequenceError> {
        let point = slot.value().expect("put needs a value");
        if self.slots[position] != Slot::Empty || self.used[point as usize] {
            return Err(SequenceError::SlotOccupied { position });
        }
        self.slots[position] = slot;
        self.used[point as usize] = true;
        Ok(())
    }

    /// Points not yet placed or pinned, ascending.
    pub fn unused_points(&self) -> Vec<Point> {
        (1..self.used.len() as Point)
            .filter(|&p| !self.used[p as usize])
            .collect()
    }

    /// Converts a fully filled sequence into a permutation.
    pub fn to_permutation(&self) -> Result<Permutation, SequenceError> {
        let mut points = Vec::with_capacity(self.slots.len());
        for (i, s) in self.slots.iter().enumerate() {
            match s {
                Slot::Filled(p) => points.push(*p),
                _ => return Err(SequenceError::UnfilledWindow { position: i }),
            }
        }
        Ok(Permutation::new(points).expect("slots hold distinct points"))
    }

    fn swap_values(&mut self, a: usize, b: usize) {
        self.slots.swap(a, b);
    }
}

/// Epoch-stamped point set, cleared in O(1).
struct Marks {
    stamp: Vec<u32>,
    epoch: u32,
}

impl Marks {
    fn new(v: usize) -> Self {
        Marks {
            stamp: vec![0; v + 1],
            epoch: 0,
        }
    }

    fn clear(&mut self) {
        self.epoch += 1;
    }

    fn mark(&mut self, p: Point) {
        self.stamp[p as usize] = self.epoch;
    }

    fn contains(&self, p: Point) -> bool {
        self.stamp[p as usize] == self.epoch
    }
}

fn mark_forbidden(
    ps: &PartialSequencing,
    position: usize,
    sts: &SteinerTripleSystem,
    ell: usize,
    marks: &mut Marks,
) -> Result<(), SequenceError> {
    marks.clear();
    let start = position.saturating_sub(ell - 1);
    for j in start..position {
        let xj = ps
            .value(j)
            .ok_or(SequenceError::UnfilledWindow { position: j })?;
        for k in j + 1..position {
            let xk = ps
                .value(k)
                .ok_or(SequenceError::UnfilledWindow { position: k })?;
            marks.mark(sts.third_unchecked(xj, xk));
        }
    }
    Ok(())
}

/// Third points of all pairs among the `ell-1` positions before `position`;
/// the values that would complete a block there. Ascending.
pub fn forbidden_set(
    ps: &PartialSequencing,
    position: usize,
    sts: &SteinerTripleSystem,
    ell: usize,
) -> Result<Vec<Point>, SequenceError> {
    let mut marks = Marks::new(sts.order());
    mark_forbidden(ps, position, sts, ell, &mut marks)?;
    Ok((1..=sts.order() as Point).filter(|&p| marks.contains(p)).collect())
}

fn smallest_allowed(ps: &PartialSequencing, marks: &Marks) -> Option<Point> {
    (1..ps.used.len() as Point).find(|&p| !ps.used[p as usize] && !marks.contains(p))
}

/// Fills each position in `range` with the smallest unused point outside
/// its forbidden set.
pub fn greedy_fill(
    ps: &mut PartialSequencing,
    range: Range<usize>,
    sts: &SteinerTripleSystem,
    ell: usize,
) -> Result<(), SequenceError> {
    let mut marks = Marks::new(sts.order());
    for position in range {
        if ps.slot(position) != Slot::Empty {
            return Err(SequenceError::SlotOccupied { position });
        }
        mark_forbidden(ps, position, sts, ell, &mut marks)?;
        let p = smallest_allowed(ps, &marks).ok_or(SequenceError::GreedyStuck { position })?;
        ps.put(position, Slot::Filled(p))?;
    }
    Ok(())
}

/// Like [`greedy_fill`], but a candidate is also rejected when it completes
/// a block with any two filled or pinned positions sharing an
/// `ell`-window with it, including pinned positions further right.
/// Pinned positions in `range` are taken as they are.
pub fn modified_greedy_fill(
    ps: &mut PartialSequencing,
    range: Range<usize>,
    sts: &SteinerTripleSystem,
    ell: usize,
) -> Result<(), SequenceError> {
    let v = ps.len();
    let mut marks = Marks::new(sts.order());
    for position in range {
        match ps.slot(position) {
            Slot::Pinned(p) => {
                ps.slots[position] = Slot::Filled(p);
                continue;
            }
            Slot::Filled(_) => return Err(SequenceError::SlotOccupied { position }),
            Slot::Empty => {}
        }
        marks.clear();
        let lo = position.saturating_sub(ell - 1);
        let hi = (position + ell - 1).min(v - 1);
        for a in lo..=hi {
            let Some(xa) = ps.value(a).filter(|_| a != position) else {
                continue;
            };
            for b in a + 1..=hi {
                let Some(xb) = ps.value(b).filter(|_| b != position) else {
                    continue;
                };
                if b.max(position) - a.min(position) < ell {
                    marks.mark(sts.third_unchecked(xa, xb));
                }
            }
        }
        let p = smallest_allowed(ps, &marks).ok_or(SequenceError::GreedyStuck { position })?;
        ps.put(position, Slot::Filled(p))?;
    }
    Ok(())
}

/// Points to pin into the overflow after `protected`: third points of every
/// pair of positions in `protected` at distance below `ell`, minus points
/// already placed. Ascending. Also returns the number of pairs examined.
pub fn overflow_targets(
    ps: &PartialSequencing,
    protected: Range<usize>,
    sts: &SteinerTripleSystem,
    ell: usize,
) -> Result<(Vec<Point>, usize), SequenceError> {
    let mut marks = Marks::new(sts.order());
    marks.clear();
    let mut pairs = 0;
    for j1 in protected.clone() {
        let x1 = ps
            .value(j1)
            .ok_or(SequenceError::UnfilledWindow { position: j1 })?;
        for j2 in j1 + 1..protected.end.min(j1 + ell) {
            let x2 = ps
                .value(j2)
                .ok_or(SequenceError::UnfilledWindow { position: j2 })?;
            pairs += 1;
            let z = sts.third_unchecked(x1, x2);
            if !ps.is_used(z) {
                marks.mark(z);
            }
        }
    }
    let targets = (1..=sts.order() as Point).filter(|&p| marks.contains(p)).collect();
    Ok((targets, pairs))
}

/// Builds segment `seg` in place: fills buffers and core, pins overflow
/// targets and fills the rest of the overflow. `limit` is the first position
/// the segment may not reach.
pub fn build_segment(
    ps: &mut PartialSequencing,
    start: usize,
    index: usize,
    limit: usize,
    sts: &SteinerTripleSystem,
    ell: usize,
) -> Result<SegmentLayout, SequenceError> {
    let mut seg = segment_skeleton(start, index, ell);
    let v = ps.len();
    let too_small = |position| SequenceError::OrderTooSmall {
        v,
        required: refined_bound(ell),
        position: Some(position),
    };
    if seg.right_buffer.end > limit {
        return Err(too_small(limit));
    }
    greedy_fill(ps, seg.protected(), sts, ell)?;
    let (targets, _) = overflow_targets(ps, seg.protected(), sts, ell)?;
    set_overflow(&mut seg, ell, targets.len());
    if seg.overflow.end > limit {
        return Err(too_small(limit));
    }
    for (&position, &y) in seg.pinned.iter().zip(&targets) {
        ps.put(position, Slot::Pinned(y))?;
    }
    modified_greedy_fill(ps, seg.overflow.clone(), sts, ell)?;
    Ok(seg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwapAction {
    /// The leftover point was already permissible.
    Kept,
    /// Exchanged with the leftover point originally numbered `j` (1-based).
    WithLeftover(usize),
    /// Exchanged with the point at `position` in the core of the segment.
    WithCore(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwapRecord {
    /// 1-based tail slot, equal to the segment whose core may be used.
    pub index: usize,
    pub action: SwapAction,
    /// The point that ended up in the tail slot.
    pub placed: Point,
}

/// Searches every `ell`-window inside `span` for a block. Returns the start
/// of the first offending window.
pub fn scan_for_block(
    ps: &PartialSequencing,
    span: Range<usize>,
    sts: &SteinerTripleSystem,
    ell: usize,
) -> Option<usize> {
    if span.is_empty() {
        return None;
    }
    let last_start = span.end.saturating_sub(ell).max(span.start);
    for start in span.start..=last_start {
        let window: Vec<Point> = (start..(start + ell).min(span.end))
            .filter_map(|i| ps.value(i))
            .collect();
        for (a, &x) in window.iter().enumerate() {
            for &y in &window[a + 1..] {
                let z = sts.third_unchecked(x, y);
                if window.contains(&z) {
                    return Some(start);
                }
            }
        }
    }
    None
}

/// Places the leftover points into the tail and makes every tail slot
/// permissible. Every position outside `layout.tail` must be filled.
pub fn swap_phase(
    ps: &mut PartialSequencing,
    layout: &Layout,
    sts: &SteinerTripleSystem,
    params: SequencingParams,
) -> Result<Vec<SwapRecord>, SequenceError> {
    let ell = params.ell();
    let leftovers = ps.unused_points();
    debug_assert_eq!(leftovers.len(), layout.tail.len());
    for (position, &p) in layout.tail.clone().zip(&leftovers) {
        ps.put(position, Slot::Filled(p))?;
    }
    // tail slot -> original leftover number, tracked through exchanges
    let mut origin: Vec<usize> = (1..=leftovers.len()).collect();

    let mut marks = Marks::new(sts.order());
    let mut records = Vec::with_capacity(layout.tail.len());
    for (k, position) in layout.tail.clone().enumerate() {
        let index = k + 1;
        mark_forbidden(ps, position, sts, ell, &mut marks)?;
        let current = ps.value(position).expect("tail filled");
        let action = if !marks.contains(current) {
            SwapAction::Kept
        } else if let Some(other) = (position + 1..layout.tail.end)
            .find(|&q| !marks.contains(ps.value(q).expect("tail filled")))
        {
            let j = origin[other - layout.tail.start];
            ps.swap_values(position, other);
            origin.swap(k, other - layout.tail.start);
            SwapAction::WithLeftover(j)
        } else {
            let seg = layout
                .segments
                .get(k)
                .ok_or(SequenceError::SwapExhausted { index })?;
            let core_pos = seg
                .core
                .clone()
                .find(|&q| !marks.contains(ps.value(q).expect("core filled")))
                .ok_or(SequenceError::SwapExhausted { index })?;
            ps.swap_values(position, core_pos);
            if let Some(window_start) = scan_for_block(ps, seg.span(), sts, ell) {
                return Err(SequenceError::UnsafeSwap {
                    index,
                    window_start,
                });
            }
            SwapAction::WithCore(core_pos)
        };
        records.push(SwapRecord {
            index,
            action,
            placed: ps.value(position).expect("tail filled"),
        });
    }
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SequenceOptions {
    /// Attempt orders below the guaranteed bound.
    pub best_effort: bool,
}

/// A verified sequencing with the layout actually used and the swap log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequencing {
    pub permutation: Permutation,
    pub swaps: Vec<SwapRecord>,
    pub layout: Layout,
}

impl Sequencing {
    pub fn core_swaps(&self) -> usize {
        self.swaps
            .iter()
            .filter(|r| matches!(r.action, SwapAction::WithCore(_)))
            .count()
    }
}

/// Produces an `ell`-good sequencing of `sts`. Fails with
/// [`SequenceError::OrderTooSmall`] below the guaranteed order.
pub fn sequence(sts: &SteinerTripleSystem, ell: usize) -> Result<Sequencing, SequenceError> {
    sequence_with(sts, ell, SequenceOptions::default())
}

pub fn sequence_with(
    sts: &SteinerTripleSystem,
    ell: usize,
    options: SequenceOptions,
) -> Result<Sequencing, SequenceError> {
    let params = SequencingParams::new(ell)?;
    let v = sts.order();
    let big_l = params.swap_count();
    if !options.best_effort {
        compute_layout(v, params)?;
    }
    if v <= big_l {
        return Err(SequenceError::OrderTooSmall {
            v,
            required: refined_bound(ell),
            position: Some(0),
        });
    }
    let tail = v - big_l..v;

    let mut ps = PartialSequencing::new(v);
    let mut segments = Vec::with_capacity(big_l);
    let mut cursor = 0;
    for i in 1..=big_l {
        let seg = build_segment(&mut ps, cursor, i, tail.start, sts, ell)?;
        cursor = seg.overflow.end;
        segments.push(seg);
    }
    let gap = cursor..tail.start;
    greedy_fill(&mut ps, gap.clone(), sts, ell)?;

    let layout = Layout {
        v,
        ell,
        segments,
        gap,
        tail,
    };
    let swaps = swap_phase(&mut ps, &layout, sts, params)?;
    let permutation = ps.to_permutation()?;
    match analysis::is_ell_good(sts, &permutation, ell)? {
        Verdict::Good => Ok(Sequencing {
            permutation,
            swaps,
            layout,
        }),
        Verdict::Bad(w) => Err(SequenceError::NotGood(w)),
    }
}

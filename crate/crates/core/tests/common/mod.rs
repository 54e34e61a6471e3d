//! Test oracles. Written independently of the library code paths they check.

#![allow(dead_code)]

use std::collections::HashSet;

use ellgood_core::design::{Point, SteinerTripleSystem};
use ellgood_core::Permutation;
use rand::seq::SliceRandom;
use rand::Rng;

/// Scans every window of `ell` consecutive entries for a whole block.
pub fn window_scan_good(sts: &SteinerTripleSystem, perm: &[Point], ell: usize) -> bool {
    window_scan_range(sts, perm, 0..perm.len(), ell).is_none()
}

/// First window start inside `range` whose window (clipped to `range`)
/// contains a block. Every triple of window entries is looked up in the
/// block list.
pub fn window_scan_range(
    sts: &SteinerTripleSystem,
    perm: &[Point],
    range: std::ops::Range<usize>,
    ell: usize,
) -> Option<usize> {
    let blocks: HashSet<[Point; 3]> = sts
        .blocks()
        .iter()
        .map(|b| {
            let mut t = b.points();
            t.sort_unstable();
            t
        })
        .collect();
    let last = range.end.saturating_sub(ell).max(range.start);
    for start in range.start..=last.min(range.end.saturating_sub(1)) {
        let w = &perm[start..(start + ell).min(range.end)];
        for a in 0..w.len() {
            for b in a + 1..w.len() {
                for c in b + 1..w.len() {
                    let mut t = [w[a], w[b], w[c]];
                    t.sort_unstable();
                    if blocks.contains(&t) {
                        return Some(start);
                    }
                }
            }
        }
    }
    None
}

/// Enumerates index pairs `(j1, j2)`, `1 <= j1 < j2 <= n`, `j2 - j1 <= ell - 1`,
/// with `n = ell` for the first core and `i + 2 ell - 2` otherwise.
pub fn brute_j(ell: usize, i: usize) -> u64 {
    let n = if i == 1 { ell } else { i + 2 * ell - 2 };
    let mut count = 0;
    for j1 in 1..=n {
        for j2 in j1 + 1..=n {
            if j2 - j1 < ell {
                count += 1;
            }
        }
    }
    count
}

/// Lays out `m` pinned points as a slot string (`.` free, `y` pinned) and
/// returns its length.
pub fn simulate_overflow(ell: usize, m: usize) -> usize {
    if m == 0 {
        return 0;
    }
    let mut slots = String::new();
    slots.push_str(&".".repeat(ell - 2));
    slots.push('y');
    for k in 2..=m {
        let free = match (ell % 2, k % 2) {
            (0, _) => (ell - 2) / 2,
            (_, 0) => (ell - 3) / 2,
            _ => (ell - 1) / 2,
        };
        slots.push_str(&".".repeat(free));
        slots.push('y');
    }
    // no three pinned points share a window
    let pins: Vec<usize> = slots.match_indices('y').map(|(i, _)| i).collect();
    for w in pins.windows(3) {
        assert!(w[2] - w[0] >= ell);
    }
    slots.len()
}

/// Component sum with overflows from [`simulate_overflow`] and pair counts
/// from [`brute_j`].
pub fn simulated_refined_bound(ell: usize) -> usize {
    let big_l = (ell - 1) * (ell - 2) / 2;
    let gap = if ell.is_multiple_of(2) { ell - 2 } else { ell - 1 };
    let mut total = 1 + (ell - 1) + simulate_overflow(ell, brute_j(ell, 1) as usize);
    for i in 2..=big_l {
        total += 2 * (ell - 1) + i + simulate_overflow(ell, brute_j(ell, i) as usize);
    }
    total + gap + big_l
}

/// Tries all `v!` orderings. Returns the first good one found, in
/// lexicographic order.
pub fn naive_search(sts: &SteinerTripleSystem, ell: usize, fix_first: bool) -> Option<Vec<Point>> {
    let v = sts.order();
    let mut perm: Vec<Point> = (1..=v as Point).collect();
    loop {
        if (!fix_first || perm[0] == 1) && window_scan_good(sts, &perm, ell) {
            return Some(perm);
        }
        if !next_permutation(&mut perm) {
            return None;
        }
    }
}

pub fn next_permutation(a: &mut [Point]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).unwrap();
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// The same system under a random relabelling of its points.
pub fn relabel<R: Rng>(sts: &SteinerTripleSystem, rng: &mut R) -> SteinerTripleSystem {
    let v = sts.order();
    let mut labels: Vec<Point> = (1..=v as Point).collect();
    labels.shuffle(rng);
    SteinerTripleSystem::new(
        v,
        sts.blocks()
            .iter()
            .map(|b| b.points().map(|p| labels[p as usize - 1])),
    )
    .expect("relabelling preserves validity")
}

pub fn random_permutation<R: Rng>(v: usize, rng: &mut R) -> Permutation {
    let mut p: Vec<Point> = (1..=v as Point).collect();
    p.shuffle(rng);
    Permutation::new(p).unwrap()
}

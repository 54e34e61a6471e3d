//! Exhaustive depth-first search for `ell`-good sequencings of small systems.
//!
//! Prefixes are extended one point at a time, skipping any point that would
//! complete a block with two of the previous `ell - 1` points. A verdict of
//! [`SearchVerdict::None`] is only reported after the whole tree has been
//! visited; a node budget that runs out yields
//! [`SearchError::BudgetExhausted`] instead.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::analysis::{is_ell_good, AnalysisError};
use crate::design::{Permutation, Point, SteinerTripleSystem};

/// Largest order the bitmask search supports.
pub const MAX_SEARCH_ORDER: usize = 128;

/// Largest order for which point-transitivity is checked before fixing the
/// first point.
const MAX_TRANSITIVITY_ORDER: usize = 31;

const FLUSH_EVERY: u64 = 1 << 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("window length must be at least 3, got {0}")]
    InvalidEll(usize),
    #[error("exhaustive search supports orders up to {MAX_SEARCH_ORDER}, got {0}")]
    TooLarge(usize),
    #[error("node budget must be positive")]
    InvalidBudget,
    #[error("node budget exhausted after {nodes} nodes at ell = {ell}; inconclusive")]
    BudgetExhausted { ell: usize, nodes: u64 },
    #[error("search produced a sequencing that fails verification")]
    Unverified,
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Stop after visiting this many nodes.
    pub node_budget: Option<u64>,
    /// Fix the first point to 1. Only applied when the system's automorphism
    /// group is verified to be point-transitive, so verdicts are unaffected.
    pub symmetry_fixing: bool,
    /// Worker threads; the tree is split at the top.
    pub jobs: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: Some(1_000_000_000),
            symmetry_fixing: true,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchVerdict {
    /// The lexicographically least `ell`-good sequencing in the searched tree.
    Found(Permutation),
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub verdict: SearchVerdict,
    pub nodes_visited: u64,
    pub elapsed: Duration,
    /// Whether the first point was fixed.
    pub symmetry_applied: bool,
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&Permutation> {
        match &self.verdict {
            SearchVerdict::Found(p) => Some(p),
            SearchVerdict::None => None,
        }
    }
}

struct Shared<'a> {
    nodes: &'a AtomicU64,
    stop: &'a AtomicBool,
    budget: u64,
}

struct Searcher<'a> {
    v: usize,
    ell: usize,
    // 0-based thirds, v*v, diagonal unused
    third: &'a [u8],
    full: u128,
    seq: Vec<u8>,
    used: u128,
    local_nodes: u64,
    shared: Shared<'a>,
}

enum Stop {
    Budget,
    Cancelled,
}

impl<'a> Searcher<'a> {
    fn forbidden(&self) -> u128 {
        let depth = self.seq.len();
        let start = (depth + 1).saturating_sub(self.ell);
        let window = &self.seq[start..depth];
        let mut mask = 0u128;
        for (i, &a) in window.iter().enumerate() {
            let row = &self.third[a as usize * self.v..(a as usize + 1) * self.v];
            for &b in &window[i + 1..] {
                mask |= 1u128 << row[b as usize];
            }
        }
        mask
    }

    fn count_node(&mut self) -> Result<(), Stop> {
        self.local_nodes += 1;
        if self.local_nodes.is_multiple_of(FLUSH_EVERY) {
            self.flush();
            if self.shared.stop.load(Ordering::Relaxed) {
                return Err(Stop::Cancelled);
            }
        }
        let seen = self.shared.nodes.load(Ordering::Relaxed) + self.local_nodes % FLUSH_EVERY;
        if seen > self.shared.budget {
            return Err(Stop::Budget);
        }
        Ok(())
    }

    fn flush(&mut self) {
        let pending = self.local_nodes % FLUSH_EVERY;
        let pending = if pending == 0 { FLUSH_EVERY } else { pending };
        self.shared.nodes.fetch_add(pending, Ordering::Relaxed);
        self.local_nodes = 0;
    }

    fn finish(&mut self) {
        let pending = self.local_nodes % FLUSH_EVERY;
        self.shared.nodes.fetch_add(pending, Ordering::Relaxed);
        self.local_nodes = 0;
    }

    fn place(&mut self, p: u8) {
        self.seq.push(p);
        self.used |= 1u128 << p;
    }

    fn unplace(&mut self) {
        let p = self.seq.pop().expect("nonempty");
        self.used &= !(1u128 << p);
    }

    /// Candidates for the next position, as a bitmask.
    fn candidates(&self) -> u128 {
        self.full & !self.used & !self.forbidden()
    }

    fn dfs(&mut self) -> Result<bool, Stop> {
        if self.seq.len() == self.v {
            return Ok(true);
        }
        let mut avail = self.candidates();
        while avail != 0 {
            let p = avail.trailing_zeros() as u8;
            avail &= avail - 1;
            self.count_node()?;
            self.place(p);
            if self.dfs()? {
                return Ok(true);
            }
            self.unplace();
        }
        Ok(false)
    }
}

fn third_table(sts: &SteinerTripleSystem) -> Vec<u8> {
    let v = sts.order();
    let mut t = vec![0u8; v * v];
    for a in 0..v {
        for b in 0..v {
            if a != b {
                t[a * v + b] = (sts.third_unchecked(a as Point + 1, b as Point + 1) - 1) as u8;
            }
        }
    }
    t
}

fn full_mask(v: usize) -> u128 {
    if v == 128 {
        u128::MAX
    } else {
        (1u128 << v) - 1
    }
}

/// Searches for an `ell`-good sequencing of `sts`.
pub fn search_sequencing(
    sts: &SteinerTripleSystem,
    ell: usize,
    config: &SearchConfig,
) -> Result<SearchOutcome, SearchError> {
    if ell < 3 {
        return Err(SearchError::InvalidEll(ell));
    }
    let v = sts.order();
    if v > MAX_SEARCH_ORDER {
        return Err(SearchError::TooLarge(v));
    }
    if config.node_budget == Some(0) {
        return Err(SearchError::InvalidBudget);
    }
    let started = Instant::now();
    let symmetry_applied = config.symmetry_fixing && is_point_transitive(sts);
    let third = third_table(sts);
    let budget = config.node_budget.unwrap_or(u64::MAX);
    let nodes = AtomicU64::new(0);
    let stop = AtomicBool::new(false);

    let make = |prefix: &[u8]| {
        let mut s = Searcher {
            v,
            ell,
            third: &third,
            full: full_mask(v),
            seq: Vec::with_capacity(v),
            used: 0,
            local_nodes: 0,
            shared: Shared {
                nodes: &nodes,
                stop: &stop,
                budget,
            },
        };
        for &p in prefix {
            s.place(p);
        }
        s
    };

    let root: Vec<u8> = if symmetry_applied { vec![0] } else { vec![] };
    if symmetry_applied {
        nodes.fetch_add(1, Ordering::Relaxed);
    }

    let result: Result<Option<Vec<u8>>, Stop> = if config.jobs <= 1 {
        let mut s = make(&root);
        let r = s.dfs();
        s.finish();
        r.map(|found| found.then(|| s.seq.clone()))
    } else {
        // split on the first free position below the root
        let top = make(&root);
        let tasks: Vec<u8> = bits(top.candidates()).collect();
        drop(top);
        let next = AtomicUsize::new(0);
        let best = AtomicUsize::new(usize::MAX);
        let found: Mutex<Vec<(usize, Vec<u8>)>> = Mutex::new(Vec::new());
        let budget_hit = AtomicBool::new(false);
        std::thread::scope(|scope| {
            for _ in 0..config.jobs.min(tasks.len().max(1)) {
                scope.spawn(|| loop {
                    let k = next.fetch_add(1, Ordering::Relaxed);
                    if k >= tasks.len() || stop.load(Ordering::Relaxed) {
                        break;
                    }
                    if k > best.load(Ordering::Relaxed) {
                        continue;
                    }
                    let mut prefix = root.clone();
                    prefix.push(tasks[k]);
                    let mut s = make(&prefix);
                    let r = s.count_node().and_then(|_| s.dfs());
                    s.finish();
                    match r {
                        Ok(true) => {
                            best.fetch_min(k, Ordering::Relaxed);
                            found.lock().expect("poisoned").push((k, s.seq.clone()));
                        }
                        Ok(false) => {}
                        Err(Stop::Budget) => {
                            budget_hit.store(true, Ordering::Relaxed);
                            stop.store(true, Ordering::Relaxed);
                        }
                        Err(Stop::Cancelled) => {}
                    }
                });
            }
        });
        let witness = found
            .into_inner()
            .expect("poisoned")
            .into_iter()
            .min_by_key(|(k, _)| *k)
            .map(|(_, seq)| seq);
        match witness {
            Some(seq) => Ok(Some(seq)),
            None if budget_hit.load(Ordering::Relaxed) => Err(Stop::Budget),
            None => Ok(None),
        }
    };

    let nodes_visited = nodes.load(Ordering::Relaxed);
    let verdict = match result {
        Ok(Some(seq)) => {
            let perm = Permutation::new(seq.iter().map(|&p| p as Point + 1).collect())
                .map_err(|_| SearchError::Unverified)?;
            if !is_ell_good(sts, &perm, ell)?.is_good() {
                return Err(SearchError::Unverified);
            }
            SearchVerdict::Found(perm)
        }
        Ok(None) => SearchVerdict::None,
        Err(_) => {
            return Err(SearchError::BudgetExhausted {
                ell,
                nodes: nodes_visited,
            })
        }
    };
    Ok(SearchOutcome {
        verdict,
        nodes_visited,
        elapsed: started.elapsed(),
        symmetry_applied,
    })
}

fn bits(mut mask: u128) -> impl Iterator<Item = u8> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let p = mask.trailing_zeros() as u8;
        mask &= mask - 1;
        Some(p)
    })
}

/// Result of probing `ell = 3, 4, ...` until no sequencing exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxEll {
    /// Largest `ell` with a sequencing, if any.
    pub best: Option<usize>,
    pub outcomes: Vec<(usize, SearchOutcome)>,
}

/// Largest `ell` for which `sts` has an `ell`-good sequencing. An
/// `ell`-good sequencing is also `m`-good for every `m < ell`, so the
/// probe stops at the first `ell` without one.
pub fn max_ell(sts: &SteinerTripleSystem, config: &SearchConfig) -> Result<MaxEll, SearchError> {
    let mut best = None;
    let mut outcomes = Vec::new();
    for ell in 3..=sts.order().max(3) {
        let outcome = search_sequencing(sts, ell, config)?;
        let found = outcome.found().is_some();
        outcomes.push((ell, outcome));
        if !found {
            break;
        }
        best = Some(ell);
    }
    Ok(MaxEll { best, outcomes })
}

/// True when every point can be mapped to point 1 by an automorphism.
/// Returns false without checking for orders above a small limit.
pub fn is_point_transitive(sts: &SteinerTripleSystem) -> bool {
    let v = sts.order();
    if v > MAX_TRANSITIVITY_ORDER {
        return false;
    }
    (2..=v as Point).all(|p| find_automorphism(sts, 1, p).is_some())
}

/// An automorphism of `sts` sending `from` to `to`, as `map[x - 1] = image`.
pub fn find_automorphism(sts: &SteinerTripleSystem, from: Point, to: Point) -> Option<Vec<Point>> {
    let v = sts.order();
    let mut state = PartialMap {
        map: vec![0; v + 1],
        inv: vec![0; v + 1],
        mapped: Vec::with_capacity(v),
    };
    if !state.assign(sts, from, to) {
        return None;
    }
    state.complete(sts).map(|m| m.map[1..].to_vec())
}

#[derive(Clone)]
struct PartialMap {
    map: Vec<Point>,
    inv: Vec<Point>,
    mapped: Vec<Point>,
}

impl PartialMap {
    /// Sets `x -> y` and closes under `third`. False on conflict.
    fn assign(&mut self, sts: &SteinerTripleSystem, x: Point, y: Point) -> bool {
        let mut queue = vec![(x, y)];
        while let Some((x, y)) = queue.pop() {
            let (xi, yi) = (x as usize, y as usize);
            if self.map[xi] != 0 {
                if self.map[xi] != y {
                    return false;
                }
                continue;
            }
            if self.inv[yi] != 0 {
                return false;
            }
            self.map[xi] = y;
            self.inv[yi] = x;
            for &z in &self.mapped {
                let image = sts.third_unchecked(y, self.map[z as usize]);
                queue.push((sts.third_unchecked(x, z), image));
            }
            self.mapped.push(x);
        }
        true
    }

    fn complete(self, sts: &SteinerTripleSystem) -> Option<PartialMap> {
        let v = sts.order();
        let Some(a) = (1..=v as Point).find(|&a| self.map[a as usize] == 0) else {
            return Some(self);
        };
        for b in (1..=v as Point).filter(|&b| self.inv[b as usize] == 0) {
            let mut next = self.clone();
            if next.assign(sts, a, b) {
                if let Some(done) = next.complete(sts) {
                    return Some(done);
                }
            }
        }
        None
    }
}

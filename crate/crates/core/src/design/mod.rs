//! Steiner triple systems: validated construction, the third-point function,
//! standard constructions and a small text format.

mod construct;
pub mod fixtures;
mod io;

use std::fmt;

use thiserror::Error;

pub use construct::{bose_construction, construct, skolem_construction, Construction};
pub use io::{load_permutation, load_permutations, load_system, save_permutation, save_system};

/// A point label. Points of an order-`v` system are `1..=v`.
pub type Point = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DesignError {
    #[error("no Steiner triple system of order {0} (need v >= 3 and v = 1 or 3 mod 6)")]
    InvalidOrder(usize),
    #[error("expected {expected} blocks, found {found}")]
    WrongBlockCount { expected: usize, found: usize },
    #[error("pair {{{0}, {1}}} is covered by more than one block")]
    PairCoveredTwice(Point, Point),
    #[error("pair {{{0}, {1}}} is not covered by any block")]
    PairUncovered(Point, Point),
    #[error("point {point} is outside 1..={v}")]
    OutOfRangePoint { point: Point, v: usize },
    #[error("triple {0:?} repeats a point")]
    DegenerateTriple([Point; 3]),
    #[error("third point of ({0}, {0}) is undefined")]
    SamePoint(Point),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("not a permutation of 1..={v}: {reason}")]
    NotAPermutation { v: usize, reason: String },
    #[error(transparent)]
    Io(#[from] IoError),
}

/// `std::io::Error` is not `PartialEq`; keep its rendered message instead.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("i/o error: {0}")]
pub struct IoError(pub String);

impl From<std::io::Error> for DesignError {
    fn from(e: std::io::Error) -> Self {
        DesignError::Io(IoError(e.to_string()))
    }
}

/// A block: three distinct points in ascending order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block([Point; 3]);

impl Block {
    /// Normalizes `points` to ascending order. Rejects repeated points.
    pub fn new(points: [Point; 3]) -> Result<Self, DesignError> {
        let mut p = points;
        p.sort_unstable();
        if p[0] == p[1] || p[1] == p[2] {
            return Err(DesignError::DegenerateTriple(points));
        }
        Ok(Block(p))
    }

    pub fn points(&self) -> [Point; 3] {
        self.0
    }

    pub fn contains(&self, x: Point) -> bool {
        self.0.contains(&x)
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}, {}}}", self.0[0], self.0[1], self.0[2])
    }
}

/// Returns true when a Steiner triple system of order `v` exists.
pub fn admissible_order(v: usize) -> bool {
    v >= 3 && (v % 6 == 1 || v % 6 == 3)
}

/// A validated Steiner triple system on the points `1..=v`.
///
/// Immutable once built. The dense third-point table makes [`third`](Self::third)
/// a single indexed load, which the sequencer relies on in its inner loops.
#[derive(Clone, PartialEq, Eq)]
pub struct SteinerTripleSystem {
    v: usize,
    blocks: Vec<Block>,
    // (x-1)*v + (y-1) -> third point, 0 on the diagonal
    third_table: Vec<Point>,
}

impl fmt::Debug for SteinerTripleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SteinerTripleSystem")
            .field("v", &self.v)
            .field("blocks", &self.blocks.len())
            .finish()
    }
}

impl SteinerTripleSystem {
    /// Validates `triples` as an STS(`v`) and builds the third-point table.
    ///
    /// Checks, in order: admissible order, point range, distinct points,
    /// no pair covered twice, block count, every pair covered.
    pub fn new<I>(v: usize, triples: I) -> Result<Self, DesignError>
    where
        I: IntoIterator<Item = [Point; 3]>,
    {
        if !admissible_order(v) {
            return Err(DesignError::InvalidOrder(v));
        }
        let mut blocks = Vec::with_capacity(v * (v - 1) / 6);
        let mut third_table = vec![0; v * v];
        for t in triples {
            if let Some(&point) = t.iter().find(|&&p| p == 0 || p as usize > v) {
                return Err(DesignError::OutOfRangePoint { point, v });
            }
            let block = Block::new(t)?;
            let [a, b, c] = block.points();
            for (x, y, z) in [(a, b, c), (a, c, b), (b, c, a)] {
                let i = (x as usize - 1) * v + (y as usize - 1);
                if third_table[i] != 0 {
                    return Err(DesignError::PairCoveredTwice(x, y));
                }
                third_table[i] = z;
                third_table[(y as usize - 1) * v + (x as usize - 1)] = z;
            }
            blocks.push(block);
        }
        let expected = v * (v - 1) / 6;
        if blocks.len() != expected {
            return Err(DesignError::WrongBlockCount {
                expected,
                found: blocks.len(),
            });
        }
        // Implied by the two checks above (3b = C(v,2)).
        for x in 1..=v {
            for y in x + 1..=v {
                if third_table[(x - 1) * v + (y - 1)] == 0 {
                    return Err(DesignError::PairUncovered(x as Point, y as Point));
                }
            }
        }
        Ok(SteinerTripleSystem {
            v,
            blocks,
            third_table,
        })
    }

    pub fn order(&self) -> usize {
        self.v
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Number of blocks through each point, `(v-1)/2`.
    pub fn replication(&self) -> usize {
        (self.v - 1) / 2
    }

    /// The third point of the block through `x` and `y`.
    pub fn third(&self, x: Point, y: Point) -> Result<Point, DesignError> {
        for p in [x, y] {
            if p == 0 || p as usize > self.v {
                return Err(DesignError::OutOfRangePoint { point: p, v: self.v });
            }
        }
        if x == y {
            return Err(DesignError::SamePoint(x));
        }
        Ok(self.third_unchecked(x, y))
    }

    /// Unchecked variant of [`third`](Self::third) for hot loops.
    /// Returns 0 when `x == y`; panics on out-of-range points.
    #[inline]
    pub fn third_unchecked(&self, x: Point, y: Point) -> Point {
        self.third_table[(x as usize - 1) * self.v + (y as usize - 1)]
    }
}

/// An ordering `x_1 .. x_v` of the points `1..=v`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<Point>);

impl Permutation {
    /// Checks that `order` is a bijection onto `1..=order.len()`.
    pub fn new(order: Vec<Point>) -> Result<Self, DesignError> {
        let v = order.len();
        let mut seen = vec![false; v + 1];
        for &p in &order {
            if p == 0 || p as usize > v {
                return Err(DesignError::NotAPermutation {
                    v,
                    reason: format!("entry {p} out of range"),
                });
            }
            if std::mem::replace(&mut seen[p as usize], true) {
                return Err(DesignError::NotAPermutation {
                    v,
                    reason: format!("entry {p} repeated"),
                });
            }
        }
        Ok(Permutation(order))
    }

    pub fn identity(v: usize) -> Self {
        Permutation((1..=v as Point).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Point] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Point> {
        self.0
    }

    /// `positions()[p]` is the 0-based index of point `p`; index 0 is unused.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![usize::MAX; self.0.len() + 1];
        for (i, &p) in self.0.iter().enumerate() {
            pos[p as usize] = i;
        }
        pos
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

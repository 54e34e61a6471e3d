use std::fmt;
use std::str::FromStr;

use super::{DesignError, Point, SteinerTripleSystem};

/// Which standard construction to use for a given order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Construction {
    /// Bose for `v = 3 mod 6`, Skolem for `v = 1 mod 6`.
    #[default]
    Auto,
    Bose,
    Skolem,
}

impl FromStr for Construction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Construction::Auto),
            "bose" => Ok(Construction::Bose),
            "skolem" => Ok(Construction::Skolem),
            other => Err(format!("unknown construction `{other}` (auto|bose|skolem)")),
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Construction::Auto => "auto",
            Construction::Bose => "bose",
            Construction::Skolem => "skolem",
        })
    }
}

pub fn construct(v: usize, how: Construction) -> Result<SteinerTripleSystem, DesignError> {
    match how {
        Construction::Bose => bose_construction(v),
        Construction::Skolem => skolem_construction(v),
        Construction::Auto if v % 6 == 3 => bose_construction(v),
        Construction::Auto if v % 6 == 1 => skolem_construction(v),
        Construction::Auto => Err(DesignError::InvalidOrder(v)),
    }
}

/// Bose construction of an STS(6t+3).
///
/// Uses the idempotent commutative quasigroup `a o b = (a + b)(t + 1) mod n`
/// on `Z_n`, `n = 2t + 1`. Point `(x, i)` of `Z_n x Z_3` is labelled `x + n*i + 1`.
pub fn bose_construction(v: usize) -> Result<SteinerTripleSystem, DesignError> {
    if v % 6 != 3 {
        return Err(DesignError::InvalidOrder(v));
    }
    let n = v / 3;
    let half = n.div_ceil(2);
    let label = |x: usize, i: usize| (x + n * (i % 3) + 1) as Point;
    let op = |a: usize, b: usize| ((a + b) * half) % n;

    let mut triples = Vec::with_capacity(v * (v - 1) / 6);
    for x in 0..n {
        triples.push([label(x, 0), label(x, 1), label(x, 2)]);
    }
    for i in 0..3 {
        for x in 0..n {
            for y in x + 1..n {
                triples.push([label(x, i), label(y, i), label(op(x, y), i + 1)]);
            }
        }
    }
    SteinerTripleSystem::new(v, triples)
}

/// Skolem construction of an STS(6t+1), `t >= 1`.
///
/// Uses the half-idempotent commutative quasigroup on `Z_2t` given by
/// `a o b = s/2` for even `s = (a + b) mod 2t` and `t + (s-1)/2` for odd `s`.
/// Point `(x, i)` is labelled `x + 2t*i + 1`; the point at infinity is `v`.
pub fn skolem_construction(v: usize) -> Result<SteinerTripleSystem, DesignError> {
    if v % 6 != 1 || v < 7 {
        return Err(DesignError::InvalidOrder(v));
    }
    let n = (v - 1) / 3;
    let t = n / 2;
    let label = |x: usize, i: usize| (x + n * (i % 3) + 1) as Point;
    let infinity = v as Point;
    let op = |a: usize, b: usize| {
        let s = (a + b) % n;
        if s.is_multiple_of(2) {
            s / 2
        } else {
            t + (s - 1) / 2
        }
    };

    let mut triples = Vec::with_capacity(v * (v - 1) / 6);
    for x in 0..t {
        triples.push([label(x, 0), label(x, 1), label(x, 2)]);
    }
    for i in 0..3 {
        for x in 0..t {
            triples.push([infinity, label(x + t, i), label(x, i + 1)]);
        }
    }
    for i in 0..3 {
        for x in 0..n {
            for y in x + 1..n {
                triples.push([label(x, i), label(y, i), label(op(x, y), i + 1)]);
            }
        }
    }
    SteinerTripleSystem::new(v, triples)
}

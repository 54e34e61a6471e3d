//! Text formats.
//!
//! STS file: `#` comment lines and blank lines are skipped; the first
//! remaining line is `v <n>`, followed by one block per line as three
//! whitespace-separated points. Blocks are written ascending; the reader
//! normalizes order.
//!
//! Permutation file: whitespace-separated points with arbitrary line breaks.
//! Lines starting with `#` are skipped.

use std::io::{BufRead, Write};

use super::{DesignError, Permutation, Point, SteinerTripleSystem};

fn parse_err(line: usize, message: impl Into<String>) -> DesignError {
    DesignError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_point(tok: &str, line: usize) -> Result<Point, DesignError> {
    tok.parse::<Point>()
        .map_err(|_| parse_err(line, format!("`{tok}` is not a point")))
}

pub fn load_system<R: BufRead>(reader: R) -> Result<SteinerTripleSystem, DesignError> {
    let mut v = None;
    let mut triples = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = text.split_whitespace().collect();
        match v {
            None => match toks.as_slice() {
                ["v", n] => {
                    let n = n
                        .parse::<usize>()
                        .map_err(|_| parse_err(lineno, format!("bad order `{n}`")))?;
                    v = Some(n);
                }
                _ => return Err(parse_err(lineno, "expected header `v <n>`")),
            },
            Some(_) => {
                if toks.len() != 3 {
                    return Err(parse_err(
                        lineno,
                        format!("expected 3 points, found {}", toks.len()),
                    ));
                }
                triples.push([
                    parse_point(toks[0], lineno)?,
                    parse_point(toks[1], lineno)?,
                    parse_point(toks[2], lineno)?,
                ]);
            }
        }
    }
    let v = v.ok_or_else(|| parse_err(0, "missing header `v <n>`"))?;
    SteinerTripleSystem::new(v, triples)
}

pub fn save_system<W: Write>(sts: &SteinerTripleSystem, mut out: W) -> Result<(), DesignError> {
    writeln!(out, "v {}", sts.order())?;
    let mut blocks = sts.blocks().to_vec();
    blocks.sort();
    for b in blocks {
        let [x, y, z] = b.points();
        writeln!(out, "{x} {y} {z}")?;
    }
    Ok(())
}

fn parse_line_points(text: &str, lineno: usize, into: &mut Vec<Point>) -> Result<(), DesignError> {
    for tok in text.split_whitespace() {
        into.push(parse_point(tok, lineno)?);
    }
    Ok(())
}

/// Reads a single permutation spread over any number of lines.
pub fn load_permutation<R: BufRead>(reader: R) -> Result<Permutation, DesignError> {
    let mut points = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.starts_with('#') {
            continue;
        }
        parse_line_points(text, idx + 1, &mut points)?;
    }
    Permutation::new(points)
}

/// Reads one permutation per non-empty, non-comment line.
pub fn load_permutations<R: BufRead>(reader: R) -> Result<Vec<Permutation>, DesignError> {
    let mut perms = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let mut points = Vec::new();
        parse_line_points(text, idx + 1, &mut points)?;
        perms.push(Permutation::new(points).map_err(|e| parse_err(idx + 1, e.to_string()))?);
    }
    Ok(perms)
}

pub fn save_permutation<W: Write>(perm: &Permutation, mut out: W) -> Result<(), DesignError> {
    writeln!(out, "{perm}")?;
    Ok(())
}

//! Small canonical systems, parsed and validated from the files under
//! `fixtures/` at call time.

use super::{load_system, SteinerTripleSystem};

pub const FANO_TEXT: &str = include_str!("../../fixtures/fano.sts");
pub const AG23_TEXT: &str = include_str!("../../fixtures/ag23.sts");
pub const CYCLIC13_TEXT: &str = include_str!("../../fixtures/cyclic13.sts");

fn load(text: &str, name: &str) -> SteinerTripleSystem {
    load_system(text.as_bytes()).unwrap_or_else(|e| panic!("fixture {name} is invalid: {e}"))
}

/// The Fano plane, STS(7).
pub fn fano() -> SteinerTripleSystem {
    load(FANO_TEXT, "fano")
}

/// The affine plane AG(2,3), STS(9).
pub fn ag23() -> SteinerTripleSystem {
    load(AG23_TEXT, "ag23")
}

/// Cyclic STS(13) developed from base blocks `{1,2,5}` and `{1,3,9}` mod 13.
pub fn cyclic13() -> SteinerTripleSystem {
    load(CYCLIC13_TEXT, "cyclic13")
}

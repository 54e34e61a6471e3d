//! Steiner triple systems and `ell`-good sequencings.
//!
//! An `ell`-good sequencing of an STS(v) is an ordering of its points in
//! which no `ell` consecutive points contain a block. This crate builds
//! systems ([`design`]), constructs sequencings for large orders
//! ([`sequencer`]), verifies them and evaluates the existence and
//! nonexistence bounds ([`analysis`]), and settles small cases by
//! exhaustive search ([`search`]).

pub mod analysis;
pub mod design;
pub mod search;
pub mod sequencer;

pub use analysis::{is_ell_good, nonexistence_ceiling, BoundReport, TypeCounts, Verdict, Witness};
pub use design::{Block, Construction, DesignError, Permutation, Point, SteinerTripleSystem};
pub use search::{max_ell, search_sequencing, SearchConfig, SearchError, SearchOutcome};
pub use sequencer::{sequence, sequence_with, SequenceError, SequenceOptions, Sequencing};

//! Folding oracles: given a sequence, rank candidate structures by energy.

mod energy;
mod enumerate;
mod exhaustive;
mod nussinov;

use std::cmp::Ordering;

use thiserror::Error;

use crate::sequence::{Sequence, SequenceError};
use crate::structure::Structure;

pub use energy::{energy, EnergyModel, EnergyModelError};
pub use enumerate::{count_structures, enumerate_structures, for_each_structure, FoldConstraints};
pub use exhaustive::ExhaustiveOracle;
pub use nussinov::{nussinov_fold, NussinovOracle};

/// Largest sequence the exhaustive enumerator accepts by default.
pub const DEFAULT_CAP: usize = 36;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum OracleError {
    #[error("length {n} exceeds the enumeration cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("invalid fold constraints: {0}")]
    InvalidConstraints(String),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldEntry {
    pub structure: Structure,
    pub energy: f64,
}

/// Energy first, then the sorted arc list lexicographically.
pub fn entry_order(a: &FoldEntry, b: &FoldEntry) -> Ordering {
    a.energy
        .total_cmp(&b.energy)
        .then_with(|| a.structure.arcs().cmp(b.structure.arcs()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldRanking {
    pub query: Sequence,
    /// Ascending by `entry_order`; `entries[0]` is the mfe structure.
    pub entries: Vec<FoldEntry>,
}

impl FoldRanking {
    pub fn mfe(&self) -> &FoldEntry {
        &self.entries[0]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn structures(&self) -> impl Iterator<Item = &Structure> {
        self.entries.iter().map(|e| &e.structure)
    }
}

/// A folding back end. Implementations are immutable and shared across threads.
pub trait FoldingOracle: Sync + Send {
    /// The `n_best` lowest-energy structures for `seq` (at least one: the
    /// arcless structure always qualifies).
    fn fold(&self, seq: &Sequence, n_best: usize) -> Result<FoldRanking, OracleError>;

    fn mfe(&self, seq: &Sequence) -> Result<FoldEntry, OracleError> {
        let mut ranking = self.fold(seq, 1)?;
        Ok(ranking.entries.swap_remove(0))
    }

    fn model(&self) -> &EnergyModel;

    fn constraints(&self) -> FoldConstraints;

    /// Longest sequence the oracle accepts, if bounded.
    fn cap(&self) -> Option<usize> {
        None
    }

    fn name(&self) -> &'static str;
}

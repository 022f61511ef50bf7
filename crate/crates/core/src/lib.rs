//! Inverse folding of 3-noncrossing, σ-canonical RNA pseudoknot structures.
//!
//! Given a target diagram, [`search::inv`] looks for a sequence whose
//! minimum-energy fold under a [`oracle::FoldingOracle`] is exactly that
//! target. The supporting modules cover diagrams and their `:()[]{}` text
//! form, sequences, loop decomposition, interval plans and two reference
//! oracles.

pub mod intervals;
pub mod loops;
pub mod oracle;
pub mod report;
pub mod search;
pub mod sequence;
pub mod structure;

pub use intervals::{decompose_intervals, IntervalPlan};
pub use loops::{decompose_loops, LoopDecomposition, LoopKind};
pub use oracle::{ExhaustiveOracle, FoldConstraints, FoldRanking, FoldingOracle, NussinovOracle};
pub use search::{inv, InvOutcome, SearchParams};
pub use sequence::{Base, BasePair, Sequence};
pub use structure::{parse_structure, serialize_structure, structure_distance, Arc, Structure};

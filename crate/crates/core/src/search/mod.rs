//! Inverse folding: start sequence, adjustment against competitors, and
//! interval-driven local search.

mod adjust;
mod competitors;
mod inv;
mod local;
mod params;
mod target;
mod trace;

pub use adjust::{adjust_seq, AdjustOutcome};
pub use competitors::{
    build_competitors, make_start, mutate_against_competitors, perturb_arc, Candidate, Competitor,
    CompetitorSet, Mutation, Perturbation,
};
pub use inv::{inv, InvOutcome, SearchError};
pub use local::local_search;
pub use params::{default_rounds, LocalSearchSeed, ParamsError, SearchParams};
pub use target::{check_target, parse_target, TargetError};
pub use trace::{IntervalRecord, RoundRecord, SearchTrace, Stage};

//! The full inverse folding pipeline.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::adjust::adjust_seq;
use super::competitors::make_start;
use super::local::local_search;
use super::params::{LocalSearchSeed, ParamsError, SearchParams};
use super::target::{check_target, TargetError};
use super::trace::{SearchTrace, Stage};
use crate::intervals::decompose_intervals;
use crate::oracle::{FoldingOracle, OracleError};
use crate::sequence::Sequence;
use crate::structure::{structure_distance, Structure};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum SearchError {
    #[error(transparent)]
    InvalidTarget(#[from] TargetError),
    #[error(transparent)]
    InvalidParams(#[from] ParamsError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum InvOutcome {
    /// `sequence` folds into the target; checked by a final oracle call.
    Success {
        sequence: Sequence,
        energy: f64,
        trace: SearchTrace,
    },
    Failure {
        best: Sequence,
        d_min: usize,
        trace: SearchTrace,
    },
}

impl InvOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, InvOutcome::Success { .. })
    }

    pub fn trace(&self) -> &SearchTrace {
        match self {
            InvOutcome::Success { trace, .. } | InvOutcome::Failure { trace, .. } => trace,
        }
    }

    /// The returned sequence on success, the best one found otherwise.
    pub fn sequence(&self) -> &Sequence {
        match self {
            InvOutcome::Success { sequence, .. } => sequence,
            InvOutcome::Failure { best, .. } => best,
        }
    }

    pub fn distance(&self) -> usize {
        match self {
            InvOutcome::Success { .. } => 0,
            InvOutcome::Failure { d_min, .. } => *d_min,
        }
    }

    /// Adjust rounds used.
    pub fn rounds(&self) -> usize {
        self.trace().rounds.len()
    }
}

/// Searches for a sequence whose mfe structure under `oracle` is `target`.
/// The random stream is seeded from `params.seed`.
pub fn inv(
    target: &Structure,
    oracle: &dyn FoldingOracle,
    params: &SearchParams,
) -> Result<InvOutcome, SearchError> {
    params.validate()?;
    check_target(target, oracle.constraints())?;
    if let Some(cap) = oracle.cap() {
        if target.len() > cap {
            return Err(OracleError::CapExceeded {
                n: target.len(),
                cap,
            }
            .into());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut trace = SearchTrace::default();

    let start = make_start(target, &mut rng);
    trace.snapshot(Stage::Start, &start);
    let adjusted = adjust_seq(&start, target, oracle, params, &mut rng, &mut trace)?;

    let mut candidates = Vec::new();
    if adjusted.solved {
        candidates.push(adjusted.seq_min.clone());
    } else {
        let plan = decompose_intervals(target).map_err(|_| TargetError::TooManyCrossings {
            crossing: target.crossing_number(),
            max: 2,
        })?;
        let seed_seq = match params.local_search_seed {
            LocalSearchSeed::Middle => &adjusted.seq_middle,
            LocalSearchSeed::Min => &adjusted.seq_min,
        };
        let searched = local_search(
            seed_seq, target, &plan, oracle, params, &mut rng, &mut trace,
        )?;
        candidates.push(searched);
        candidates.push(adjusted.seq_min.clone());
    }

    // never report success without folding the returned sequence
    let mut best: Option<(usize, Sequence)> = None;
    for seq in candidates {
        trace.oracle_calls += 1;
        let mfe = oracle.mfe(&seq)?;
        if &mfe.structure == target {
            trace.snapshot(Stage::Final, &seq);
            trace.verified = true;
            return Ok(InvOutcome::Success {
                sequence: seq,
                energy: mfe.energy,
                trace,
            });
        }
        let d = structure_distance(&mfe.structure, target).expect("equal lengths");
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, seq));
        }
    }
    let (d_min, best) = best.expect("at least one candidate");
    trace.snapshot(Stage::Final, &best);
    trace.verified = true;
    Ok(InvOutcome::Failure { best, d_min, trace })
}

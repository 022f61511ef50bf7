//! Competitor-driven adjustment of the start sequence.

use rand::Rng;

use super::competitors::{build_competitors, mutate_against_competitors};
use super::params::SearchParams;
use super::trace::{RoundRecord, SearchTrace, Stage};
use crate::oracle::{FoldingOracle, OracleError};
use crate::sequence::Sequence;
use crate::structure::{structure_distance, Structure};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjustOutcome {
    /// Last accepted sequence (the start if nothing was accepted).
    pub seq_middle: Sequence,
    /// Sequence whose mfe came closest to the target.
    pub seq_min: Sequence,
    pub d_min: usize,
    /// Set when some sequence folded exactly into the target; it is `seq_min`.
    pub solved: bool,
}

pub(crate) fn mfe_distance(
    oracle: &dyn FoldingOracle,
    seq: &Sequence,
    target: &Structure,
    trace: &mut SearchTrace,
) -> Result<usize, OracleError> {
    trace.oracle_calls += 1;
    let mfe = oracle.mfe(seq)?;
    Ok(structure_distance(&mfe.structure, target).expect("equal lengths"))
}

/// Runs at most `params.rounds_for(n)` rounds of fold, perturb and mutate.
pub fn adjust_seq<R: Rng + ?Sized>(
    start: &Sequence,
    target: &Structure,
    oracle: &dyn FoldingOracle,
    params: &SearchParams,
    rng: &mut R,
    trace: &mut SearchTrace,
) -> Result<AdjustOutcome, OracleError> {
    let rounds = params.rounds_for(target.len());
    let mut lambda = start.clone();
    let mut seq_middle = start.clone();
    let mut seq_min = start.clone();
    let mut d_min = usize::MAX;

    for round in 1..=rounds {
        // Step I
        trace.oracle_calls += 1;
        let ranking = oracle.fold(&lambda, params.n_suboptimal)?;
        let d = structure_distance(&ranking.mfe().structure, target).expect("equal lengths");
        if d < d_min {
            d_min = d;
            seq_min = lambda.clone();
        }
        if d == 0 {
            trace.rounds.push(RoundRecord {
                round,
                d,
                d_min,
                competitors: 0,
                mutations: 0,
                step3_attempts: 0,
                relaxed: 0,
                fallbacks: 0,
                accepted: true,
                seq_min: seq_min.clone(),
            });
            return Ok(AdjustOutcome {
                seq_middle: lambda,
                seq_min,
                d_min,
                solved: true,
            });
        }

        // Step II
        let competitors = build_competitors(&ranking, &lambda, target);

        // Step III with retries; keep the attempt with the smallest distance
        let mut best: Option<(usize, Sequence, usize)> = None;
        let (mut relaxed, mut fallbacks, mut attempts) = (0, 0, 0);
        let mut accepted = false;
        for _ in 0..=params.step3_retries {
            attempts += 1;
            let m = mutate_against_competitors(&lambda, target, &competitors, rng);
            relaxed += m.relaxed;
            fallbacks += m.fallbacks;
            let d_new = mfe_distance(oracle, &m.sequence, target, trace)?;
            if d_new < d_min {
                d_min = d_new;
                seq_min = m.sequence.clone();
            }
            let better = best.as_ref().is_none_or(|(bd, _, _)| d_new < *bd);
            if better {
                best = Some((d_new, m.sequence.clone(), m.changed.len()));
            }
            if d_new == 0 || d_new < d_min.saturating_add(params.distance_window) {
                accepted = true;
                best = Some((d_new, m.sequence, m.changed.len()));
                break;
            }
        }
        let (d_best, next, mutations) = best.expect("at least one attempt");
        if accepted {
            seq_middle = next.clone();
        }
        lambda = next;
        trace.snapshot(Stage::Adjust, &lambda);
        trace.rounds.push(RoundRecord {
            round,
            d,
            d_min,
            competitors: competitors.len(),
            mutations,
            step3_attempts: attempts,
            relaxed,
            fallbacks,
            accepted,
            seq_min: seq_min.clone(),
        });
        if d_best == 0 {
            return Ok(AdjustOutcome {
                seq_middle: lambda.clone(),
                seq_min: lambda,
                d_min: 0,
                solved: true,
            });
        }
    }
    Ok(AdjustOutcome {
        seq_middle,
        seq_min,
        d_min,
        solved: false,
    })
}

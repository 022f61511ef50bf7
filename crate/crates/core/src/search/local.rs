//! Interval-by-interval stochastic local search.

use rand::seq::SliceRandom;
use rand::Rng;

use super::adjust::mfe_distance;
use super::params::SearchParams;
use super::trace::{IntervalRecord, SearchTrace, Stage};
use crate::intervals::IntervalPlan;
use crate::oracle::{FoldingOracle, OracleError};
use crate::sequence::{Base, BasePair, Sequence};
use crate::structure::{structure_distance, Structure};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Move {
    Point(usize),
    Pair(usize, usize),
}

/// Random change at one position or one target pair, staying compatible.
fn apply<R: Rng + ?Sized>(seq: &Sequence, mv: Move, rng: &mut R) -> Sequence {
    let mut out = seq.clone();
    match mv {
        Move::Point(p) => {
            let old = seq.base(p);
            let choices: Vec<Base> = Base::ALL.into_iter().filter(|&b| b != old).collect();
            out.set(p, *choices.choose(rng).expect("three alternatives"));
        }
        Move::Pair(p, q) => {
            let old = seq.pair_at(p, q).expect("compatible with target");
            let choices: Vec<BasePair> = BasePair::ALL.into_iter().filter(|&b| b != old).collect();
            let (x, y) = choices.choose(rng).expect("five alternatives").bases();
            out.set(p, x);
            out.set(q, y);
        }
    }
    out
}

struct Fold {
    structure: Structure,
    energy: f64,
    d: usize,
}

fn fold_sub(
    oracle: &dyn FoldingOracle,
    sub: &Sequence,
    target: &Structure,
    trace: &mut SearchTrace,
    folds: &mut usize,
) -> Result<Fold, OracleError> {
    trace.oracle_calls += 1;
    *folds += 1;
    let e = oracle.mfe(sub)?;
    let d = structure_distance(&e.structure, target).expect("equal lengths");
    Ok(Fold {
        structure: e.structure,
        energy: e.energy,
        d,
    })
}

/// Positions (local, 1-based) that may change: mispaired positions in the
/// restricted fold and their backbone neighbours. Positions paired in the full
/// target to a partner outside `[l, r]` are frozen.
fn moves(
    fold: &Structure,
    local_target: &Structure,
    full_target: &Structure,
    l: usize,
) -> (Vec<Move>, Vec<Move>) {
    let len = local_target.len();
    let mut marked = vec![false; len + 2];
    for x in 1..=len {
        if fold.partner(x) != local_target.partner(x) {
            marked[x - 1] = true;
            marked[x] = true;
            marked[x + 1] = true;
        }
    }
    let mut u1 = Vec::new();
    let mut u2 = Vec::new();
    for x in 1..=len {
        let full = full_target.partner(x + l - 1);
        if full == 0 {
            if marked[x] {
                u1.push(Move::Point(x));
            }
        } else {
            let y = local_target.partner(x);
            if y > x && (marked[x] || marked[y]) {
                u2.push(Move::Pair(x, y));
            }
        }
    }
    (u1, u2)
}

/// Searches one interval and returns the best subsequence with its distance.
#[allow(clippy::too_many_arguments)]
fn search_interval<R: Rng + ?Sized>(
    sub: Sequence,
    local_target: &Structure,
    full_target: &Structure,
    l: usize,
    oracle: &dyn FoldingOracle,
    params: &SearchParams,
    rng: &mut R,
    trace: &mut SearchTrace,
    record: &mut IntervalRecord,
) -> Result<Sequence, OracleError> {
    let budget = params.budget_multiplier * local_target.len();
    let mut folds = 0;
    let mut current = sub;
    let mut cur = fold_sub(oracle, &current, local_target, trace, &mut folds)?;
    let mut best = current.clone();
    let mut d_best = cur.d;
    record.d_start = cur.d;

    while cur.d > 0 && record.phase_runs < budget {
        // Phase I
        record.phase_runs += 1;
        let (mut u1, mut u2) = moves(&cur.structure, local_target, full_target, l);
        u1.shuffle(rng);
        u2.shuffle(rng);

        // Phase II
        let mut pool: Vec<(Sequence, Fold)> = Vec::new();
        let mut jumped = false;
        for mv in u1.into_iter().chain(u2) {
            let cand = apply(&current, mv, rng);
            let f = fold_sub(oracle, &cand, local_target, trace, &mut folds)?;
            if f.d < cur.d {
                current = cand;
                cur = f;
                jumped = true;
                break;
            }
            if cur.d < f.d
                && f.d < cur.d + params.distance_window
                && rng.gen_bool(params.uphill_probability)
            {
                record.uphill += 1;
                current = cand;
                cur = f;
                jumped = true;
                break;
            }
            if f.d == cur.d {
                pool.push((cand, f));
            }
        }
        if !jumped {
            // continue from the neutral candidate with the lowest mfe energy
            let pick = pool
                .into_iter()
                .reduce(|a, b| if b.1.energy < a.1.energy { b } else { a });
            if let Some((s, f)) = pick {
                current = s;
                cur = f;
            }
        }
        if cur.d < d_best {
            d_best = cur.d;
            best = current.clone();
        }
    }
    record.d_min = d_best;
    record.folds = folds;
    Ok(best)
}

/// Runs the local search over every interval of `plan`, splicing each
/// interval's best subsequence back into the sequence.
pub fn local_search<R: Rng + ?Sized>(
    seq_middle: &Sequence,
    target: &Structure,
    plan: &IntervalPlan,
    oracle: &dyn FoldingOracle,
    params: &SearchParams,
    rng: &mut R,
    trace: &mut SearchTrace,
) -> Result<Sequence, OracleError> {
    let mut seq = seq_middle.clone();
    let mut full_d = mfe_distance(oracle, &seq, target, trace)?;
    if full_d == 0 {
        return Ok(seq);
    }
    for iv in plan.intervals() {
        let (l, r) = iv.bounds();
        let local_target = target.restrict(l, r);
        let mut record = IntervalRecord {
            l,
            r,
            phase_runs: 0,
            folds: 0,
            d_start: 0,
            d_min: 0,
            uphill: 0,
            full_before: full_d,
            full_after: full_d,
        };
        let best = search_interval(
            seq.slice(l, r),
            &local_target,
            target,
            l,
            oracle,
            params,
            rng,
            trace,
            &mut record,
        )?;
        if best != seq.slice(l, r) {
            seq.splice(l, &best);
            full_d = mfe_distance(oracle, &seq, target, trace)?;
        }
        record.full_after = full_d;
        trace.snapshot(Stage::Local, &seq);
        trace.intervals.push(record);
        if full_d == 0 {
            break;
        }
    }
    Ok(seq)
}

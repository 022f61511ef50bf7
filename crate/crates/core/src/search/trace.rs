//! Observability for a single search run.

use std::fmt;

use crate::sequence::Sequence;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord {
    pub round: usize,
    /// Distance of the round's mfe to the target.
    pub d: usize,
    pub d_min: usize,
    pub competitors: usize,
    /// Positions changed by the accepted (or best) mutation.
    pub mutations: usize,
    pub step3_attempts: usize,
    pub relaxed: usize,
    pub fallbacks: usize,
    pub accepted: bool,
    pub seq_min: Sequence,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalRecord {
    pub l: usize,
    pub r: usize,
    pub phase_runs: usize,
    pub folds: usize,
    /// Restricted distance before and after the interval's search.
    pub d_start: usize,
    pub d_min: usize,
    pub uphill: usize,
    /// Full-target distance before and after splicing the best subsequence.
    pub full_before: usize,
    pub full_after: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Start,
    Adjust,
    Local,
    Final,
}

impl Stage {
    fn tag(self) -> &'static str {
        match self {
            Stage::Start => "start",
            Stage::Adjust => "adjust",
            Stage::Local => "local",
            Stage::Final => "final",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SearchTrace {
    pub rounds: Vec<RoundRecord>,
    pub intervals: Vec<IntervalRecord>,
    /// Every sequence the run committed to, in order.
    pub snapshots: Vec<(Stage, Sequence)>,
    pub oracle_calls: usize,
    /// Whether the reported outcome came from a final oracle check.
    pub verified: bool,
}

impl SearchTrace {
    pub fn snapshot(&mut self, stage: Stage, seq: &Sequence) {
        self.snapshots.push((stage, seq.clone()));
    }

    pub fn fallbacks(&self) -> usize {
        self.rounds.iter().map(|r| r.fallbacks).sum()
    }

    /// Best distance seen while adjusting, if any round ran.
    pub fn adjust_d_min(&self) -> Option<usize> {
        self.rounds.last().map(|r| r.d_min)
    }
}

/// Tab-separated records, one per round, interval and snapshot.
impl fmt::Display for SearchTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rounds {
            writeln!(
                f,
                "round\t{}\td={}\td_min={}\tcompetitors={}\tmutations={}\tattempts={}\trelaxed={}\tfallbacks={}\taccepted={}",
                r.round,
                r.d,
                r.d_min,
                r.competitors,
                r.mutations,
                r.step3_attempts,
                r.relaxed,
                r.fallbacks,
                r.accepted
            )?;
        }
        for iv in &self.intervals {
            writeln!(
                f,
                "interval\t[{},{}]\truns={}\tfolds={}\td_start={}\td_min={}\tuphill={}\tsplice={}->{}",
                iv.l, iv.r, iv.phase_runs, iv.folds, iv.d_start, iv.d_min, iv.uphill, iv.full_before, iv.full_after
            )?;
        }
        for (stage, s) in &self.snapshots {
            writeln!(f, "seq\t{}\t{}", stage.tag(), s)?;
        }
        writeln!(
            f,
            "oracle_calls\t{}\tverified\t{}",
            self.oracle_calls, self.verified
        )
    }
}

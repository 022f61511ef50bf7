//! Target corpora, per-trial summary records and aggregated statistics.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use thiserror::Error;

use crate::oracle::FoldingOracle;
use crate::search::{inv, InvOutcome, SearchError, SearchParams};
use crate::structure::Structure;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ReportError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
}

/// A named target from a corpus file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub id: String,
    pub text: String,
}

/// Reads `id structure` lines; a bare structure gets the id `t<line>`.
/// Blank lines and `#` comments are skipped.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, ReportError> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let (id, structure) = match fields.as_slice() {
            [s] => (format!("t{}", k + 1), s.to_string()),
            [id, s] => (id.to_string(), s.to_string()),
            _ => {
                return Err(ReportError::Malformed {
                    line: k + 1,
                    msg: format!("expected `id structure`, found {line:?}"),
                })
            }
        };
        out.push(CorpusEntry {
            id,
            text: structure,
        });
    }
    Ok(out)
}

/// One trial: `target_id seed success rounds distance time_ms`. The time is
/// written as `-` when not recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummaryRecord {
    pub target_id: String,
    pub seed: u64,
    pub success: bool,
    pub rounds: usize,
    pub distance: usize,
    pub time_ms: Option<u64>,
}

impl fmt::Display for SummaryRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {} ",
            self.target_id, self.seed, self.success as u8, self.rounds, self.distance
        )?;
        match self.time_ms {
            Some(t) => write!(f, "{t}"),
            None => write!(f, "-"),
        }
    }
}

impl FromStr for SummaryRecord {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: &str| ReportError::Malformed {
            line: 1,
            msg: msg.to_string(),
        };
        let f: Vec<&str> = s.split_whitespace().collect();
        let [id, seed, success, rounds, distance, time] = f.as_slice() else {
            return Err(bad("expected six fields"));
        };
        Ok(SummaryRecord {
            target_id: id.to_string(),
            seed: seed.parse().map_err(|_| bad("bad seed"))?,
            success: match *success {
                "1" => true,
                "0" => false,
                _ => return Err(bad("success must be 0 or 1")),
            },
            rounds: rounds.parse().map_err(|_| bad("bad rounds"))?,
            distance: distance.parse().map_err(|_| bad("bad distance"))?,
            time_ms: match *time {
                "-" => None,
                t => Some(t.parse().map_err(|_| bad("bad time"))?),
            },
        })
    }
}

/// Runs one seeded search and summarises it.
pub fn run_trial(
    target_id: &str,
    target: &Structure,
    oracle: &dyn FoldingOracle,
    params: &SearchParams,
    timed: bool,
) -> Result<(SummaryRecord, InvOutcome), SearchError> {
    let clock = Instant::now();
    let outcome = inv(target, oracle, params)?;
    let record = SummaryRecord {
        target_id: target_id.to_string(),
        seed: params.seed,
        success: outcome.is_success(),
        rounds: outcome.rounds(),
        distance: outcome.distance(),
        time_ms: timed.then(|| clock.elapsed().as_millis() as u64),
    };
    Ok((record, outcome))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TargetStats {
    pub target_id: String,
    pub n: usize,
    pub trials: usize,
    pub successes: usize,
    pub mean_rounds: f64,
    pub median_rounds: f64,
    /// `None` when no trial was timed.
    pub mean_ms: Option<f64>,
}

impl TargetStats {
    pub fn success_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }

    /// Aggregates the records of one target.
    pub fn from_records(target_id: &str, n: usize, records: &[SummaryRecord]) -> Self {
        let mut rounds: Vec<usize> = records.iter().map(|r| r.rounds).collect();
        rounds.sort_unstable();
        let trials = records.len();
        let mean_rounds = if trials == 0 {
            0.0
        } else {
            rounds.iter().sum::<usize>() as f64 / trials as f64
        };
        let median_rounds = match trials {
            0 => 0.0,
            t if t % 2 == 1 => rounds[t / 2] as f64,
            t => (rounds[t / 2 - 1] + rounds[t / 2]) as f64 / 2.0,
        };
        let times: Vec<u64> = records.iter().filter_map(|r| r.time_ms).collect();
        let mean_ms =
            (!times.is_empty()).then(|| times.iter().sum::<u64>() as f64 / times.len() as f64);
        TargetStats {
            target_id: target_id.to_string(),
            n,
            trials,
            successes: records.iter().filter(|r| r.success).count(),
            mean_rounds,
            median_rounds,
            mean_ms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct StatsReport {
    pub rows: Vec<TargetStats>,
}

impl fmt::Display for StatsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "target\tn\ttrials\tsuccesses\trate\tmean_rounds\tmedian_rounds\tmean_ms"
        )?;
        for r in &self.rows {
            let ms = r.mean_ms.map_or("-".to_string(), |m| format!("{m:.1}"));
            writeln!(
                f,
                "{}\t{}\t{}\t{}\t{:.3}\t{:.2}\t{:.1}\t{}",
                r.target_id,
                r.n,
                r.trials,
                r.successes,
                r.success_rate(),
                r.mean_rounds,
                r.median_rounds,
                ms
            )?;
        }
        Ok(())
    }
}

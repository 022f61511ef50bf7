//! Toy stacking energy model.
//!
//! Energies are dimensionless. A structure scores the sum of its stacked
//! adjacencies, a per-position unpaired term and a per-knot penalty.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::loops::count_pseudoknots;
use crate::sequence::{compatible_unchecked, BasePair, Sequence, SequenceError};
use crate::structure::Structure;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum EnergyModelError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("stack score {outer}/{inner} = {value} must not be positive")]
    PositiveStackScore {
        outer: &'static str,
        inner: &'static str,
        value: f64,
    },
    #[error("{name} = {value} must be a finite non-negative number")]
    NegativePenalty { name: &'static str, value: f64 },
    #[error("cannot read energy file: {0}")]
    Io(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyModel {
    /// Indexed `[outer][inner]` by `BasePair::index`.
    stack: [[f64; 6]; 6],
    pub unpaired_penalty: f64,
    pub pseudoknot_penalty: f64,
}

fn pair_strength(p: BasePair) -> f64 {
    match p {
        BasePair::GC | BasePair::CG => -3.0,
        BasePair::AU | BasePair::UA => -2.0,
        BasePair::GU | BasePair::UG => -1.0,
    }
}

impl Default for EnergyModel {
    fn default() -> Self {
        let mut stack = [[0.0; 6]; 6];
        for p in BasePair::ALL {
            for q in BasePair::ALL {
                // the weaker pair sets the adjacency score
                stack[p.index()][q.index()] = pair_strength(p).max(pair_strength(q));
            }
        }
        EnergyModel {
            stack,
            unpaired_penalty: 0.0,
            pseudoknot_penalty: 2.0,
        }
    }
}

impl EnergyModel {
    #[inline]
    pub fn stack_score(&self, outer: BasePair, inner: BasePair) -> f64 {
        self.stack[outer.index()][inner.index()]
    }

    pub fn set_stack_score(&mut self, outer: BasePair, inner: BasePair, value: f64) {
        self.stack[outer.index()][inner.index()] = value;
    }

    /// Most negative stack score in the table.
    pub fn best_stack_score(&self) -> f64 {
        self.stack.iter().flatten().copied().fold(0.0, f64::min)
    }

    pub fn validate(&self) -> Result<(), EnergyModelError> {
        for p in BasePair::ALL {
            for q in BasePair::ALL {
                let value = self.stack_score(p, q);
                // NaN fails too
                if value.is_nan() || value > 0.0 {
                    return Err(EnergyModelError::PositiveStackScore {
                        outer: p.name(),
                        inner: q.name(),
                        value,
                    });
                }
            }
        }
        for (name, value) in [
            ("unpaired_penalty", self.unpaired_penalty),
            ("pseudoknot_penalty", self.pseudoknot_penalty),
        ] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(EnergyModelError::NegativePenalty { name, value });
            }
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self, EnergyModelError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| EnergyModelError::Io(e.to_string()))?;
        text.parse()
    }

    /// Stacking part only: the sum over adjacent arcs `(i,j),(i+1,j-1)`.
    pub(crate) fn stacking(&self, seq: &Sequence, s: &Structure) -> f64 {
        s.arcs()
            .iter()
            .filter(|a| s.partner(a.i + 1) == a.j - 1 && a.j - 1 > a.i + 1)
            .map(|a| {
                let outer = seq.pair_at(a.i, a.j).expect("compatible");
                let inner = seq.pair_at(a.i + 1, a.j - 1).expect("compatible");
                self.stack_score(outer, inner)
            })
            .sum()
    }
}

/// Parses `key value` lines. Keys: `unpaired_penalty`, `pseudoknot_penalty`,
/// and `stack OUTER INNER` where OUTER/INNER are pair names or `*`.
/// `#` starts a comment. Unlisted entries keep their default.
impl FromStr for EnergyModel {
    type Err = EnergyModelError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut model = EnergyModel::default();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| EnergyModelError::Parse { line: line_no, msg };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let number = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| err(format!("expected a number, found {s:?}")))
            };
            match fields.as_slice() {
                ["unpaired_penalty", v] => model.unpaired_penalty = number(v)?,
                ["pseudoknot_penalty", v] => model.pseudoknot_penalty = number(v)?,
                ["stack", outer, inner, v] => {
                    let value = number(v)?;
                    let outer =
                        pairs_matching(outer).ok_or_else(|| err(format!("bad pair {outer:?}")))?;
                    let inner =
                        pairs_matching(inner).ok_or_else(|| err(format!("bad pair {inner:?}")))?;
                    for &p in &outer {
                        for &q in &inner {
                            model.set_stack_score(p, q, value);
                        }
                    }
                }
                _ => return Err(err(format!("unrecognised entry {line:?}"))),
            }
        }
        model.validate()?;
        Ok(model)
    }
}

fn pairs_matching(name: &str) -> Option<Vec<BasePair>> {
    if name == "*" {
        return Some(BasePair::ALL.to_vec());
    }
    BasePair::ALL
        .iter()
        .find(|p| p.name().eq_ignore_ascii_case(name))
        .map(|&p| vec![p])
}

impl fmt::Display for EnergyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "unpaired_penalty {}", self.unpaired_penalty)?;
        writeln!(f, "pseudoknot_penalty {}", self.pseudoknot_penalty)?;
        for p in BasePair::ALL {
            for q in BasePair::ALL {
                writeln!(
                    f,
                    "stack {} {} {}",
                    p.name(),
                    q.name(),
                    self.stack_score(p, q)
                )?;
            }
        }
        Ok(())
    }
}

/// Free energy of `s` folded into `structure` under `model`.
pub fn energy(
    seq: &Sequence,
    structure: &Structure,
    model: &EnergyModel,
) -> Result<f64, SequenceError> {
    if seq.len() != structure.len() {
        return Err(SequenceError::LengthMismatch {
            seq: seq.len(),
            structure: structure.len(),
        });
    }
    if !compatible_unchecked(seq, structure) {
        return Err(SequenceError::IncompatibleSequence);
    }
    let unpaired = structure.unpaired_positions().count() as f64;
    let knots = if structure.has_crossing() {
        count_pseudoknots(structure) as f64
    } else {
        0.0
    };
    Ok(model.stacking(seq, structure)
        + model.unpaired_penalty * unpaired
        + model.pseudoknot_penalty * knots)
}

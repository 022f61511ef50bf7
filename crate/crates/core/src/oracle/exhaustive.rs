//! Exhaustive folding: score every admissible structure compatible with the
//! sequence and keep the `N` best.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::enumerate::{Dfs, FoldConstraints};
use super::{
    entry_order, EnergyModel, FoldEntry, FoldRanking, FoldingOracle, OracleError, DEFAULT_CAP,
};
use crate::loops::knot_count;
use crate::sequence::{BasePair, Sequence};
use crate::structure::{Arc, Structure};

#[derive(Debug, Clone)]
pub struct ExhaustiveOracle {
    model: EnergyModel,
    constraints: FoldConstraints,
    cap: usize,
}

impl Default for ExhaustiveOracle {
    fn default() -> Self {
        ExhaustiveOracle {
            model: EnergyModel::default(),
            constraints: FoldConstraints::default(),
            cap: DEFAULT_CAP,
        }
    }
}

impl ExhaustiveOracle {
    pub fn new(model: EnergyModel, constraints: FoldConstraints) -> Result<Self, OracleError> {
        constraints.validate()?;
        Ok(ExhaustiveOracle {
            model,
            constraints,
            cap: DEFAULT_CAP,
        })
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }
}

struct Candidate {
    energy: f64,
    arcs: Vec<Arc>,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Candidate {}
impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.energy
            .total_cmp(&other.energy)
            .then_with(|| self.arcs.cmp(&other.arcs))
    }
}

impl FoldingOracle for ExhaustiveOracle {
    fn fold(&self, seq: &Sequence, n_best: usize) -> Result<FoldRanking, OracleError> {
        let n = seq.len();
        if n > self.cap {
            return Err(OracleError::CapExceeded { n, cap: self.cap });
        }
        let n_best = n_best.max(1);
        let width = n + 2;
        let mut pairable = vec![false; width * width];
        let mut gain = vec![0.0; width * width];
        for p in 1..=n {
            for j in p + 1..=n {
                pairable[p * width + j] = seq.pair_at(p, j).is_some();
            }
        }
        for p in 1..n {
            for j in p + 2..=n {
                if let (Some(o), Some(i)) = (seq.pair_at(p, j), inner_pair(seq, p, j)) {
                    gain[p * width + j] = self.model.stack_score(o, i);
                }
            }
        }

        let model = &self.model;
        let mut heap: BinaryHeap<Candidate> = BinaryHeap::with_capacity(n_best + 1);
        let visit = |arcs: &[Arc], crossings: usize, stacking: f64| {
            let mut e = stacking + model.unpaired_penalty * (n - 2 * arcs.len()) as f64;
            if crossings > 0 {
                e += model.pseudoknot_penalty * knot_count(arcs) as f64;
            }
            if heap.len() == n_best {
                let worst = heap.peek().expect("full heap");
                match e.total_cmp(&worst.energy) {
                    Ordering::Greater => return,
                    Ordering::Equal if arcs >= worst.arcs.as_slice() => return,
                    _ => {}
                }
            }
            heap.push(Candidate {
                energy: e,
                arcs: arcs.to_vec(),
            });
            if heap.len() > n_best {
                heap.pop();
            }
        };
        Dfs::new(n, self.constraints, Some(&pairable), Some(&gain), visit).run();

        let mut entries: Vec<FoldEntry> = heap
            .into_vec()
            .into_iter()
            .map(|c| FoldEntry {
                structure: Structure::from_arcs(n, c.arcs.iter().map(|a| (a.i, a.j)))
                    .expect("enumerated diagrams are valid"),
                energy: c.energy,
            })
            .collect();
        entries.sort_by(entry_order);
        Ok(FoldRanking {
            query: seq.clone(),
            entries,
        })
    }

    fn model(&self) -> &EnergyModel {
        &self.model
    }

    fn constraints(&self) -> FoldConstraints {
        self.constraints
    }

    fn cap(&self) -> Option<usize> {
        Some(self.cap)
    }

    fn name(&self) -> &'static str {
        "exhaustive"
    }
}

fn inner_pair(seq: &Sequence, p: usize, j: usize) -> Option<BasePair> {
    if j < p + 3 {
        return None;
    }
    seq.pair_at(p + 1, j - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::energy;
    use crate::structure::parse_structure;

    fn seq(s: &str) -> Sequence {
        s.parse().unwrap()
    }

    #[test]
    fn poly_a_folds_arcless() {
        let r = ExhaustiveOracle::default()
            .fold(&seq("AAAAAAAAAAAA"), 5)
            .unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r.mfe().structure, Structure::unpaired(12));
        assert_eq!(r.mfe().energy, 0.0);
    }

    #[test]
    fn gc_stem_is_mfe() {
        let s = seq("GGGGAAAACCCC");
        let r = ExhaustiveOracle::default().fold(&s, 10).unwrap();
        assert_eq!(r.mfe().structure, parse_structure("((((::::))))").unwrap());
        assert_eq!(r.mfe().energy, -9.0);
        for w in r.entries.windows(2) {
            assert_ne!(entry_order(&w[0], &w[1]), Ordering::Greater);
        }
        for e in &r.entries {
            assert_eq!(
                energy(&s, &e.structure, &EnergyModel::default()).unwrap(),
                e.energy
            );
        }
    }

    #[test]
    fn cap_exceeded() {
        let o = ExhaustiveOracle::default().with_cap(10);
        assert_eq!(
            o.fold(&seq("AAAAAAAAAAAA"), 1),
            Err(OracleError::CapExceeded { n: 12, cap: 10 })
        );
    }
}

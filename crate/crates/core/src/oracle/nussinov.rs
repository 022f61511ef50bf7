//! Interval dynamic programming over noncrossing, σ-canonical structures.

use super::enumerate::FoldConstraints;
use super::{EnergyModel, FoldEntry, FoldRanking, FoldingOracle, OracleError};
use crate::sequence::Sequence;
use crate::structure::Structure;

#[derive(Clone, Copy)]
enum Choice {
    Empty,
    Unpaired,
    /// `a` opens a stack of the given size whose outer arc ends at `c`.
    Stem {
        c: usize,
        size: usize,
    },
}

struct Tables {
    n: usize,
    /// Best over structures on `[a, b]` where `(a, b)` is not an arc.
    closed: Vec<f64>,
    closed_choice: Vec<Choice>,
    /// Best stem whose outer arc is `(a, c)`, with its size.
    stem: Vec<Option<(f64, usize)>>,
}

impl Tables {
    #[inline]
    fn idx(&self, a: usize, b: usize) -> usize {
        a * (self.n + 2) + b
    }

    fn closed(&self, a: usize, b: usize) -> f64 {
        if a > b {
            0.0
        } else {
            self.closed[self.idx(a, b)]
        }
    }

    /// Best over all structures on `[a, b]`.
    fn full(&self, a: usize, b: usize) -> (f64, bool) {
        let c = self.closed(a, b);
        if a < b {
            if let Some((s, _)) = self.stem[self.idx(a, b)] {
                if s < c {
                    return (s, true);
                }
            }
        }
        (c, false)
    }
}

/// Minimum-energy noncrossing structure with stacks of size ≥ `sigma` and arcs
/// of length ≥ `lambda`; pseudoknot penalties never apply.
pub fn nussinov_fold(
    seq: &Sequence,
    sigma: usize,
    lambda: usize,
    model: &EnergyModel,
) -> FoldEntry {
    let n = seq.len();
    let sigma = sigma.max(1);
    let width = n + 2;
    let mut t = Tables {
        n,
        closed: vec![0.0; width * width],
        closed_choice: vec![Choice::Empty; width * width],
        stem: vec![None; width * width],
    };
    for len in 1..=n {
        for a in 1..=n + 1 - len {
            let b = a + len - 1;
            if b > a {
                let k = t.idx(a, b);
                t.stem[k] = best_stem(seq, &t, a, b, sigma, lambda, model);
            }
            let mut best = model.unpaired_penalty + t.full(a + 1, b).0;
            let mut choice = Choice::Unpaired;
            for c in a + 1..b {
                if let Some((s, size)) = t.stem[t.idx(a, c)] {
                    let e = s + t.full(c + 1, b).0;
                    if e < best {
                        best = e;
                        choice = Choice::Stem { c, size };
                    }
                }
            }
            let k = t.idx(a, b);
            t.closed[k] = best;
            t.closed_choice[k] = choice;
        }
    }

    let mut arcs = Vec::new();
    let (energy, _) = if n == 0 { (0.0, false) } else { t.full(1, n) };
    let mut stack = vec![(1usize, n, false)];
    while let Some((a, b, closed_only)) = stack.pop() {
        if a > b {
            continue;
        }
        let (c, size) = if !closed_only && t.full(a, b).1 {
            let (_, size) = t.stem[t.idx(a, b)].expect("stem chosen");
            (b, size)
        } else {
            match t.closed_choice[t.idx(a, b)] {
                Choice::Empty => continue,
                Choice::Unpaired => {
                    stack.push((a + 1, b, false));
                    continue;
                }
                Choice::Stem { c, size } => {
                    stack.push((c + 1, b, false));
                    (c, size)
                }
            }
        };
        for s in 0..size {
            arcs.push((a + s, c - s));
        }
        stack.push((a + size, c - size, true));
    }
    FoldEntry {
        structure: Structure::from_arcs(n, arcs).expect("dynamic programme builds valid diagrams"),
        energy,
    }
}

fn best_stem(
    seq: &Sequence,
    t: &Tables,
    a: usize,
    c: usize,
    sigma: usize,
    lambda: usize,
    model: &EnergyModel,
) -> Option<(f64, usize)> {
    let mut best: Option<(f64, usize)> = None;
    let mut score = 0.0;
    let mut size = 0;
    loop {
        let (u, v) = (a + size, c - size);
        if v < u + lambda {
            break;
        }
        let Some(pair) = seq.pair_at(u, v) else {
            break;
        };
        if size > 0 {
            let outer = seq.pair_at(u - 1, v + 1).expect("stacked pair");
            score += model.stack_score(outer, pair);
        }
        size += 1;
        if size >= sigma {
            let e = score + t.closed(u + 1, v - 1);
            if best.is_none_or(|(b, _)| e < b) {
                best = Some((e, size));
            }
        }
    }
    best
}

/// Noncrossing oracle for targets beyond the exhaustive cap. Rankings hold
/// the single optimum.
#[derive(Debug, Clone, Default)]
pub struct NussinovOracle {
    model: EnergyModel,
    constraints: FoldConstraints,
}

impl NussinovOracle {
    pub fn new(model: EnergyModel, sigma: usize, lambda: usize) -> Self {
        NussinovOracle {
            model,
            constraints: FoldConstraints {
                k: 2,
                sigma,
                lambda,
            },
        }
    }
}

impl FoldingOracle for NussinovOracle {
    fn fold(&self, seq: &Sequence, _n_best: usize) -> Result<FoldRanking, OracleError> {
        let entry = nussinov_fold(
            seq,
            self.constraints.sigma,
            self.constraints.lambda,
            &self.model,
        );
        Ok(FoldRanking {
            query: seq.clone(),
            entries: vec![entry],
        })
    }

    fn model(&self) -> &EnergyModel {
        &self.model
    }

    fn constraints(&self) -> FoldConstraints {
        FoldConstraints {
            k: 2,
            ..self.constraints
        }
    }

    fn name(&self) -> &'static str {
        "nussinov"
    }
}

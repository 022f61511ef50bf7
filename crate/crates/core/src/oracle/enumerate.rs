//! Depth-first enumeration of k-noncrossing, σ-canonical diagrams.
//!
//! Positions are scanned left to right. At a free position the search either
//! leaves it unpaired or opens a whole maximal stack there, so every structure
//! is produced exactly once and in a fixed order.

use super::{OracleError, DEFAULT_CAP};
use crate::structure::{Arc, Structure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FoldConstraints {
    /// No `k` mutually crossing arcs.
    pub k: usize,
    /// Minimum stack size.
    pub sigma: usize,
    /// Minimum arc length `j - i`.
    pub lambda: usize,
}

impl Default for FoldConstraints {
    fn default() -> Self {
        FoldConstraints {
            k: 3,
            sigma: 3,
            lambda: 4,
        }
    }
}

impl FoldConstraints {
    pub fn validate(&self) -> Result<(), OracleError> {
        if !(1..=3).contains(&self.k) {
            return Err(OracleError::InvalidConstraints(format!(
                "k = {} is outside 1..=3",
                self.k
            )));
        }
        if self.sigma == 0 {
            return Err(OracleError::InvalidConstraints(
                "sigma must be positive".into(),
            ));
        }
        if self.lambda < 2 {
            return Err(OracleError::InvalidConstraints(
                "lambda must be at least 2".into(),
            ));
        }
        Ok(())
    }

    /// Whether `s` is admissible under these constraints.
    pub fn admits(&self, s: &Structure) -> bool {
        s.is_k_noncrossing(self.k)
            && s.is_sigma_canonical(self.sigma)
            && s.min_arc_length().is_none_or(|l| l >= self.lambda)
    }
}

/// Search state shared by the plain enumerator and the exhaustive oracle.
pub(crate) struct Dfs<'a, V: FnMut(&[Arc], usize, f64)> {
    n: usize,
    c: FoldConstraints,
    /// `pairable[p * (n + 2) + j]`; `None` admits every pair.
    pairable: Option<&'a [bool]>,
    /// Score of stacking `(p, j)` on `(p + 1, j - 1)`, same indexing.
    stack_gain: Option<&'a [f64]>,
    partner: Vec<usize>,
    arcs: Vec<Arc>,
    crossings: usize,
    visit: V,
}

impl<'a, V: FnMut(&[Arc], usize, f64)> Dfs<'a, V> {
    /// `visit(arcs, crossing_pairs, stacking_energy)` runs once per structure;
    /// `arcs` is sorted.
    pub(crate) fn new(
        n: usize,
        c: FoldConstraints,
        pairable: Option<&'a [bool]>,
        stack_gain: Option<&'a [f64]>,
        visit: V,
    ) -> Self {
        Dfs {
            n,
            c,
            pairable,
            stack_gain,
            partner: vec![0; n + 2],
            arcs: Vec::with_capacity(n / 2),
            crossings: 0,
            visit,
        }
    }

    pub(crate) fn run(mut self) {
        self.step(1, 0.0);
    }

    #[inline]
    fn idx(&self, p: usize, j: usize) -> usize {
        p * (self.n + 2) + j
    }

    #[inline]
    fn can_pair(&self, p: usize, j: usize) -> bool {
        self.pairable.is_none_or(|m| m[self.idx(p, j)])
    }

    /// Crossing pairs gained by adding `(u, v)`, or `None` if it creates
    /// `k` mutually crossing arcs. Existing arcs all start before `u`.
    fn crossing_gain(&self, u: usize, v: usize) -> Option<usize> {
        let mut count = 0;
        let mut last_end = usize::MAX;
        for a in &self.arcs {
            if a.i < u && u < a.j && a.j < v {
                if self.c.k <= 2 {
                    return None;
                }
                // the arcs crossing (u, v) must be pairwise nested
                if a.j >= last_end {
                    return None;
                }
                last_end = a.j;
                count += 1;
            }
        }
        Some(count)
    }

    fn step(&mut self, p: usize, energy: f64) {
        if p > self.n {
            (self.visit)(&self.arcs, self.crossings, energy);
            return;
        }
        if self.partner[p] != 0 {
            self.step(p + 1, energy);
            return;
        }
        self.step(p + 1, energy);
        if self.c.k < 2 {
            return;
        }
        let (sigma, lambda, n) = (self.c.sigma, self.c.lambda, self.n);
        // smallest outer arc holding a size-σ stack with a λ-long innermost arc
        let min_j = p + 2 * (sigma - 1) + lambda;
        for j in min_j..=n {
            if self.partner[j] != 0 || self.partner[p - 1] == j + 1 {
                continue;
            }
            // grow the stack one arc at a time
            let mut added = 0;
            let mut gained = 0;
            let mut e = energy;
            let mut ok = true;
            while added < sigma {
                let (u, v) = (p + added, j - added);
                if !self.try_push(u, v, &mut gained) {
                    ok = false;
                    break;
                }
                if added > 0 {
                    e += self.gain(u - 1, v + 1);
                }
                added += 1;
            }
            if ok {
                loop {
                    // current stack size is `added`; innermost (p+added-1, j-added+1)
                    let inner_len = (j - added + 1) - (p + added - 1);
                    if inner_len < lambda {
                        break;
                    }
                    self.step(p + added, e);
                    let (u, v) = (p + added, j - added);
                    if v < u + lambda || !self.try_push(u, v, &mut gained) {
                        break;
                    }
                    e += self.gain(u - 1, v + 1);
                    added += 1;
                }
            }
            for _ in 0..added {
                let a = self.arcs.pop().expect("pushed");
                self.partner[a.i] = 0;
                self.partner[a.j] = 0;
            }
            self.crossings -= gained;
        }
    }

    #[inline]
    fn gain(&self, p: usize, j: usize) -> f64 {
        self.stack_gain.map_or(0.0, |g| g[self.idx(p, j)])
    }

    fn try_push(&mut self, u: usize, v: usize, gained: &mut usize) -> bool {
        if self.partner[u] != 0 || self.partner[v] != 0 || !self.can_pair(u, v) {
            return false;
        }
        let Some(extra) = self.crossing_gain(u, v) else {
            return false;
        };
        self.partner[u] = v;
        self.partner[v] = u;
        self.arcs.push(Arc::new(u, v));
        self.crossings += extra;
        *gained += extra;
        true
    }
}

fn check(n: usize, c: FoldConstraints, cap: usize) -> Result<(), OracleError> {
    c.validate()?;
    if n > cap {
        return Err(OracleError::CapExceeded { n, cap });
    }
    Ok(())
}

/// Calls `f` once for every admissible structure on `n` positions.
pub fn for_each_structure<F: FnMut(&Structure)>(
    n: usize,
    c: FoldConstraints,
    cap: usize,
    mut f: F,
) -> Result<(), OracleError> {
    check(n, c, cap)?;
    Dfs::new(n, c, None, None, |arcs: &[Arc], _, _| {
        let s = Structure::from_arcs(n, arcs.iter().map(|a| (a.i, a.j)))
            .expect("enumerated diagrams are valid");
        f(&s);
    })
    .run();
    Ok(())
}

/// All admissible structures on `n` positions, in enumeration order.
pub fn enumerate_structures(n: usize, c: FoldConstraints) -> Result<Vec<Structure>, OracleError> {
    let mut out = Vec::new();
    for_each_structure(n, c, DEFAULT_CAP, |s| out.push(s.clone()))?;
    Ok(out)
}

/// Number of admissible structures, without materialising them.
pub fn count_structures(n: usize, c: FoldConstraints, cap: usize) -> Result<u64, OracleError> {
    check(n, c, cap)?;
    let mut count = 0u64;
    Dfs::new(n, c, None, None, |_: &[Arc], _, _| count += 1).run();
    Ok(count)
}

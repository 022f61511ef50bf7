//! The ordered interval plan that drives local search.
//!
//! Plan elements are the loops of the decomposition, each carrying the stacks
//! of its arcs, plus every crossing block (a connected component of the full
//! crossing graph) whose span is not already an element span. Elements are
//! ordered so that nested spans come first and disjoint spans go left to right.

use std::fmt;

use crate::loops::{components, crossing_lists, decompose_loops, LoopError, LoopKind};
use crate::structure::{Arc, Structure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntervalKind {
    /// `a_w`: extreme arc endpoints of the element.
    Arcs,
    /// `b_w`: `a_w` grown over adjacent unpaired positions.
    Padded,
    /// `c_w`: hull of `b_1..b_w`.
    Hull,
    /// The whole target, appended when the last hull falls short of it.
    Whole,
}

impl IntervalKind {
    pub fn tag(self) -> &'static str {
        match self {
            IntervalKind::Arcs => "a",
            IntervalKind::Padded => "b",
            IntervalKind::Hull => "c",
            IntervalKind::Whole => "T",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    pub l: usize,
    pub r: usize,
    pub kind: IntervalKind,
    /// Element index (0-based) the interval came from; `None` for `Whole`.
    pub element: Option<usize>,
}

impl Interval {
    pub fn bounds(&self) -> (usize, usize) {
        (self.l, self.r)
    }

    pub fn len(&self) -> usize {
        self.r + 1 - self.l
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, other: (usize, usize)) -> bool {
        self.l <= other.0 && other.1 <= self.r
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.l, self.r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementSource {
    Loop { index: usize, kind: LoopKind },
    CrossingBlock,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanElement {
    pub source: ElementSource,
    pub arcs: Vec<Arc>,
    pub a: (usize, usize),
    pub b: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalPlan {
    n: usize,
    elements: Vec<PlanElement>,
    intervals: Vec<Interval>,
}

impl IntervalPlan {
    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn elements(&self) -> &[PlanElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn target_len(&self) -> usize {
        self.n
    }

    /// `(a_w, b_w)` per element, in plan order.
    pub fn ab_pairs(&self) -> Vec<((usize, usize), (usize, usize))> {
        self.elements.iter().map(|e| (e.a, e.b)).collect()
    }
}

impl fmt::Display for IntervalPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for iv in &self.intervals {
            match iv.element {
                Some(w) => writeln!(f, "{}{}\t{}\t{}", iv.kind.tag(), w + 1, iv.l, iv.r)?,
                None => writeln!(f, "{}\t{}\t{}", iv.kind.tag(), iv.l, iv.r)?,
            }
        }
        Ok(())
    }
}

fn pad(s: &Structure, (mut l, mut r): (usize, usize)) -> (usize, usize) {
    while l > 1 && !s.is_paired(l - 1) {
        l -= 1;
    }
    while r < s.len() && !s.is_paired(r + 1) {
        r += 1;
    }
    (l, r)
}

fn span(arcs: &[Arc]) -> (usize, usize) {
    let l = arcs.iter().map(|a| a.i).min().unwrap_or(0);
    let r = arcs.iter().map(|a| a.j).max().unwrap_or(0);
    (l, r)
}

/// Builds the ordered intervals `I_1, …, I_m` for `s`; `I_m = [1, n]`.
pub fn decompose_intervals(s: &Structure) -> Result<IntervalPlan, LoopError> {
    let n = s.len();
    let dec = decompose_loops(s)?;
    let arcs = s.arcs();

    // arc -> (stack id, is innermost); the stack id indexes `stacks`.
    let stacks = s.stacks();
    let mut stack_of = std::collections::HashMap::new();
    for (k, st) in stacks.iter().enumerate() {
        for a in &st.arcs {
            stack_of.insert(*a, k);
        }
    }
    let is_inner = |a: &Arc| stacks[stack_of[a]].innermost() == *a;

    let mut elements = Vec::new();
    for (index, lp) in dec.loops().iter().enumerate() {
        if lp.kind != LoopKind::Pseudoknot && !is_inner(&lp.arcs[0]) {
            continue;
        }
        let mut el_arcs: Vec<Arc> = lp
            .arcs
            .iter()
            .flat_map(|a| stacks[stack_of[a]].arcs.iter().copied())
            .collect();
        el_arcs.sort();
        el_arcs.dedup();
        let a = span(&el_arcs);
        elements.push(PlanElement {
            source: ElementSource::Loop {
                index,
                kind: lp.kind,
            },
            arcs: el_arcs,
            a,
            b: pad(s, a),
        });
    }

    let crossing = crossing_lists(arcs);
    let (label, blocks) = components(&crossing, &vec![true; arcs.len()]);
    for k in 0..blocks {
        let block: Vec<Arc> = (0..arcs.len())
            .filter(|&x| label[x] == Some(k))
            .map(|x| arcs[x])
            .collect();
        if block.len() < 2 {
            continue;
        }
        let a = span(&block);
        if elements.iter().any(|e| e.a == a) {
            continue;
        }
        elements.push(PlanElement {
            source: ElementSource::CrossingBlock,
            arcs: block,
            a,
            b: pad(s, a),
        });
    }

    // Right end ascending, then left end descending: inner spans precede the
    // spans containing them, disjoint spans run left to right.
    elements.sort_by_key(|e| (e.a.1, std::cmp::Reverse(e.a.0)));

    let mut intervals: Vec<Interval> = Vec::new();
    let mut push = |iv: Interval| {
        if intervals.last().map(|p| p.bounds()) != Some(iv.bounds()) {
            intervals.push(iv);
        }
    };
    let mut hull: Option<(usize, usize)> = None;
    for (w, e) in elements.iter().enumerate() {
        let c = match hull {
            None => e.b,
            Some((l, r)) => (l.min(e.b.0), r.max(e.b.1)),
        };
        hull = Some(c);
        for (kind, (l, r)) in [
            (IntervalKind::Arcs, e.a),
            (IntervalKind::Padded, e.b),
            (IntervalKind::Hull, c),
        ] {
            push(Interval {
                l,
                r,
                kind,
                element: Some(w),
            });
        }
    }
    if hull != Some((1, n)) {
        push(Interval {
            l: 1,
            r: n,
            kind: IntervalKind::Whole,
            element: None,
        });
    }

    Ok(IntervalPlan {
        n,
        elements,
        intervals,
    })
}

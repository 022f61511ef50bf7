//! Arc diagrams over the positions `1..=n` and their `:()[]{}` text form.
//!
//! Positions are 1-based throughout. A diagram has vertex degree at most one
//! and never contains an arc `(i, i + 1)`.

use std::fmt;

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("empty structure")]
    Empty,
    #[error("illegal character {ch:?} at position {pos}")]
    IllegalCharacter { pos: usize, ch: char },
    #[error("unbalanced bracket {ch:?} at position {pos}")]
    UnbalancedBracket { pos: usize, ch: char },
    #[error("position {pos} is paired more than once")]
    DoubleBond { pos: usize },
    #[error("invalid arc ({i}, {j}) on {n} positions")]
    InvalidArc { i: usize, j: usize, n: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("diagram cannot be written with three bracket families")]
    NotRepresentable,
    #[error("arc ({i}, {j}) is not part of the structure")]
    ArcNotInStructure { i: usize, j: usize },
}

/// A base pair `(i, j)` with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    pub i: usize,
    pub j: usize,
}

impl Arc {
    pub fn new(i: usize, j: usize) -> Self {
        debug_assert!(i < j);
        Arc { i, j }
    }

    /// `self` and `other` cross: `i1 < i2 < j1 < j2` in either order.
    #[inline]
    pub fn crosses(&self, other: &Arc) -> bool {
        (self.i < other.i && other.i < self.j && self.j < other.j)
            || (other.i < self.i && self.i < other.j && other.j < self.j)
    }

    /// The partial order `self ≺ other`: `self` is strictly nested in `other`.
    #[inline]
    pub fn nested_in(&self, other: &Arc) -> bool {
        other.i < self.i && self.j < other.j
    }

    /// `i < x < j`.
    #[inline]
    pub fn covers(&self, x: usize) -> bool {
        self.i < x && x < self.j
    }

    #[inline]
    pub fn length(&self) -> usize {
        self.j - self.i
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i, self.j)
    }
}

/// `partner[w]` is the position paired with `w`, or 0 when `w` is unpaired.
/// Index 0 is unused.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairTable(Vec<usize>);

impl PairTable {
    #[inline]
    pub fn get(&self, w: usize) -> usize {
        self.0[w]
    }

    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

/// A maximal run of parallel arcs `(i, j), (i+1, j-1), ...`, outermost first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stack {
    pub arcs: Vec<Arc>,
}

impl Stack {
    pub fn size(&self) -> usize {
        self.arcs.len()
    }

    pub fn outermost(&self) -> Arc {
        self.arcs[0]
    }

    /// The ≺-minimal arc of the run.
    pub fn innermost(&self) -> Arc {
        *self.arcs.last().expect("stacks are never empty")
    }
}

/// An RNA structure as a diagram over `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    n: usize,
    arcs: Vec<Arc>,
    pairs: PairTable,
}

impl Structure {
    pub fn unpaired(n: usize) -> Self {
        Structure {
            n,
            arcs: Vec::new(),
            pairs: PairTable(vec![0; n + 1]),
        }
    }

    /// Builds a diagram from arcs given in any order.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self, StructureError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut partner = vec![0; n + 1];
        let mut list = Vec::new();
        for (a, b) in arcs {
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if i == 0 || j > n || j < i + 2 {
                return Err(StructureError::InvalidArc { i, j, n });
            }
            for w in [i, j] {
                if partner[w] != 0 {
                    return Err(StructureError::DoubleBond { pos: w });
                }
            }
            partner[i] = j;
            partner[j] = i;
            list.push(Arc::new(i, j));
        }
        list.sort_unstable();
        Ok(Structure {
            n,
            arcs: list,
            pairs: PairTable(partner),
        })
    }

    pub fn parse(text: &str) -> Result<Self, StructureError> {
        parse_structure(text)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Arcs sorted by start point.
    #[inline]
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn pair_table(&self) -> &PairTable {
        &self.pairs
    }

    /// `p(S, w)`: the partner of `w`, or 0.
    #[inline]
    pub fn partner(&self, w: usize) -> usize {
        self.pairs.get(w)
    }

    #[inline]
    pub fn is_paired(&self, w: usize) -> bool {
        self.pairs.get(w) != 0
    }

    pub fn contains_arc(&self, arc: Arc) -> bool {
        arc.j <= self.n && self.pairs.get(arc.i) == arc.j
    }

    pub fn unpaired_positions(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.n).filter(move |&w| !self.is_paired(w))
    }

    /// Largest number of mutually crossing arcs.
    ///
    /// A mutually crossing family has all its starts before all its ends, and
    /// sorted by start its ends increase. So for every arc start `t` we take
    /// the arcs spanning `t` and compute the longest increasing run of ends.
    pub fn crossing_number(&self) -> usize {
        let mut best = 0;
        for cut in &self.arcs {
            let t = cut.i;
            // patience sorting over ends, arcs already ordered by start
            let mut tails: Vec<usize> = Vec::new();
            for a in self.arcs.iter().take_while(|a| a.i <= t) {
                if a.j <= t {
                    continue;
                }
                match tails.binary_search(&a.j) {
                    Ok(_) => unreachable!("distinct arcs have distinct ends"),
                    Err(k) if k == tails.len() => tails.push(a.j),
                    Err(k) => tails[k] = a.j,
                }
            }
            best = best.max(tails.len());
        }
        best
    }

    pub fn is_k_noncrossing(&self, k: usize) -> bool {
        self.crossing_number() < k
    }

    pub fn has_crossing(&self) -> bool {
        self.arcs
            .iter()
            .enumerate()
            .any(|(x, a)| self.arcs[x + 1..].iter().any(|b| a.crosses(b)))
    }

    /// Partition of the arc set into maximal stacks, ordered by outermost start.
    pub fn stacks(&self) -> Vec<Stack> {
        let mut out = Vec::new();
        for &a in &self.arcs {
            if a.i > 1 && self.partner(a.i - 1) == a.j + 1 {
                continue;
            }
            let mut run = vec![a];
            let mut t = 1;
            while a.i + t < a.j - t && self.partner(a.i + t) == a.j - t {
                run.push(Arc::new(a.i + t, a.j - t));
                t += 1;
            }
            out.push(Stack { arcs: run });
        }
        out
    }

    pub fn min_stack_size(&self) -> Option<usize> {
        self.stacks().iter().map(Stack::size).min()
    }

    pub fn is_sigma_canonical(&self, sigma: usize) -> bool {
        self.min_stack_size().is_none_or(|s| s >= sigma)
    }

    pub fn min_arc_length(&self) -> Option<usize> {
        self.arcs.iter().map(Arc::length).min()
    }

    /// Number of positions whose pairing differs between the two diagrams.
    pub fn distance(&self, other: &Structure) -> Result<usize, StructureError> {
        structure_distance(self, other)
    }

    /// The diagram induced on `[l, r]`, relabelled to `1..=r-l+1`. Arcs with an
    /// endpoint outside the interval are dropped.
    pub fn restrict(&self, l: usize, r: usize) -> Structure {
        debug_assert!(1 <= l && l <= r && r <= self.n);
        let arcs = self
            .arcs
            .iter()
            .filter(|a| a.i >= l && a.j <= r)
            .map(|a| (a.i - l + 1, a.j - l + 1));
        Structure::from_arcs(r - l + 1, arcs).expect("sub-diagram of a valid diagram")
    }

    pub fn to_brackets(&self) -> Result<String, StructureError> {
        serialize_structure(self)
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match serialize_structure(self) {
            Ok(s) => f.write_str(&s),
            Err(_) => {
                let arcs: Vec<String> = self.arcs.iter().map(|a| a.to_string()).collect();
                write!(f, "[n={}] {}", self.n, arcs.join(" "))
            }
        }
    }
}

const FAMILIES: [(char, char); 3] = [('(', ')'), ('[', ']'), ('{', '}')];

/// Parses the `:()[]{}` notation; each bracket family is matched independently.
pub fn parse_structure(text: &str) -> Result<Structure, StructureError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(StructureError::Empty);
    }
    let mut open: [Vec<usize>; 3] = Default::default();
    let mut arcs = Vec::new();
    let mut n = 0;
    for (idx, ch) in text.chars().enumerate() {
        let pos = idx + 1;
        n = pos;
        if ch == ':' {
            continue;
        }
        if let Some(f) = FAMILIES.iter().position(|&(o, _)| o == ch) {
            open[f].push(pos);
        } else if let Some(f) = FAMILIES.iter().position(|&(_, c)| c == ch) {
            let i = open[f]
                .pop()
                .ok_or(StructureError::UnbalancedBracket { pos, ch })?;
            arcs.push((i, pos));
        } else {
            return Err(StructureError::IllegalCharacter { pos, ch });
        }
    }
    for (f, stack) in open.iter().enumerate() {
        if let Some(&pos) = stack.first() {
            return Err(StructureError::UnbalancedBracket {
                pos,
                ch: FAMILIES[f].0,
            });
        }
    }
    Structure::from_arcs(n, arcs)
}

/// Writes the diagram with `()` first, `[]` second and `{}` third.
///
/// A two-page diagram uses only `()` and `[]`. Otherwise pages are assigned
/// first-fit over arcs sorted by start, falling back to an exact
/// three-colouring of the crossing graph.
pub fn serialize_structure(s: &Structure) -> Result<String, StructureError> {
    let pages = two_pages(s.arcs())
        .or_else(|| first_fit_pages(s.arcs()))
        .or_else(|| exact_pages(s.arcs()));
    let pages = pages.ok_or(StructureError::NotRepresentable)?;
    let mut out = vec![':'; s.len()];
    for (a, &p) in s.arcs().iter().zip(&pages) {
        out[a.i - 1] = FAMILIES[p].0;
        out[a.j - 1] = FAMILIES[p].1;
    }
    Ok(out.into_iter().collect())
}

/// Breadth-first 2-colouring of the crossing graph; each component's
/// leftmost arc gets `()`.
fn two_pages(arcs: &[Arc]) -> Option<Vec<usize>> {
    let mut pages: Vec<Option<usize>> = vec![None; arcs.len()];
    let mut queue = std::collections::VecDeque::new();
    for root in 0..arcs.len() {
        if pages[root].is_some() {
            continue;
        }
        pages[root] = Some(0);
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            let p = pages[x].expect("queued arcs are coloured");
            for y in 0..arcs.len() {
                if !arcs[x].crosses(&arcs[y]) {
                    continue;
                }
                match pages[y] {
                    None => {
                        pages[y] = Some(1 - p);
                        queue.push_back(y);
                    }
                    Some(q) if q == p => return None,
                    Some(_) => {}
                }
            }
        }
    }
    pages.into_iter().collect()
}

fn first_fit_pages(arcs: &[Arc]) -> Option<Vec<usize>> {
    let mut pages = Vec::with_capacity(arcs.len());
    for (x, a) in arcs.iter().enumerate() {
        let p = (0..FAMILIES.len()).find(|&p| {
            arcs[..x]
                .iter()
                .zip(&pages)
                .all(|(b, &q)| q != p || !a.crosses(b))
        })?;
        pages.push(p);
    }
    Some(pages)
}

fn exact_pages(arcs: &[Arc]) -> Option<Vec<usize>> {
    fn go(arcs: &[Arc], pages: &mut Vec<usize>) -> bool {
        let x = pages.len();
        if x == arcs.len() {
            return true;
        }
        for p in 0..FAMILIES.len() {
            let ok = arcs[..x]
                .iter()
                .zip(pages.iter())
                .all(|(b, &q)| q != p || !arcs[x].crosses(b));
            if ok {
                pages.push(p);
                if go(arcs, pages) {
                    return true;
                }
                pages.pop();
            }
        }
        false
    }
    let mut pages = Vec::with_capacity(arcs.len());
    go(arcs, &mut pages).then_some(pages)
}

/// Counts positions that are not unpaired in both and not incident to an arc
/// common to both diagrams.
pub fn structure_distance(a: &Structure, b: &Structure) -> Result<usize, StructureError> {
    mismatched_positions(a, b).map(|w| w.len())
}

/// Positions contributing to `structure_distance`, ascending.
pub fn mismatched_positions(a: &Structure, b: &Structure) -> Result<Vec<usize>, StructureError> {
    if a.len() != b.len() {
        return Err(StructureError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok((1..=a.len())
        .filter(|&w| a.partner(w) != b.partner(w))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arcs_of(s: &Structure) -> Vec<(usize, usize)> {
        s.arcs().iter().map(|a| (a.i, a.j)).collect()
    }

    #[test]
    fn parses_unpaired() {
        let s = parse_structure("::::").unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.arcs().is_empty());
    }

    #[test]
    fn parses_h_type_pseudoknot() {
        let s = parse_structure("((([[[:::)))]]]").unwrap();
        assert_eq!(
            arcs_of(&s),
            vec![(1, 12), (2, 11), (3, 10), (4, 15), (5, 14), (6, 13)]
        );
        assert_eq!(s.crossing_number(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_structure("((([[[:::]]]"),
            Err(StructureError::UnbalancedBracket { pos: 1, ch: '(' })
        ));
        assert!(matches!(
            parse_structure("(((:::]]]"),
            Err(StructureError::UnbalancedBracket { pos: 7, ch: ']' })
        ));
        assert!(matches!(
            parse_structure("((.))"),
            Err(StructureError::IllegalCharacter { pos: 3, ch: '.' })
        ));
        assert!(matches!(parse_structure(""), Err(StructureError::Empty)));
        assert!(matches!(
            parse_structure(":():"),
            Err(StructureError::InvalidArc { i: 2, j: 3, .. })
        ));
    }

    #[test]
    fn from_arcs_rejects_double_bond() {
        assert_eq!(
            Structure::from_arcs(10, [(1, 5), (5, 9)]),
            Err(StructureError::DoubleBond { pos: 5 })
        );
    }

    #[test]
    fn serializes_three_mutually_crossing_arcs() {
        let s = Structure::from_arcs(11, [(1, 7), (4, 9), (5, 11)]).unwrap();
        assert_eq!(s.crossing_number(), 3);
        let text = serialize_structure(&s).unwrap();
        assert_eq!(text, "(::[{:):]:}");
        assert_eq!(parse_structure(&text).unwrap(), s);
    }

    #[test]
    fn serializes_arcless() {
        assert_eq!(
            serialize_structure(&Structure::unpaired(4)).unwrap(),
            "::::"
        );
    }

    #[test]
    fn stacks_partition_arcs() {
        let s = parse_structure("((([[[:::)))]]]").unwrap();
        let st = s.stacks();
        assert_eq!(st.len(), 2);
        assert!(st.iter().all(|x| x.size() == 3));
        assert!(s.is_sigma_canonical(3));

        let t = Structure::from_arcs(10, [(1, 10), (3, 8)]).unwrap();
        let st = t.stacks();
        assert_eq!(st.iter().map(Stack::size).collect::<Vec<_>>(), vec![1, 1]);
        assert!(!t.is_sigma_canonical(3));
    }

    #[test]
    fn distance_cases() {
        let s = parse_structure("((([[[:::)))]]]").unwrap();
        assert_eq!(structure_distance(&s, &s).unwrap(), 0);
        let open = Structure::unpaired(15);
        assert_eq!(structure_distance(&open, &s).unwrap(), 12);
        assert!(matches!(
            structure_distance(&open, &Structure::unpaired(3)),
            Err(StructureError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn restrict_relabels() {
        let s = parse_structure(":((((::::))))::").unwrap();
        let r = s.restrict(3, 12);
        assert_eq!(arcs_of(&r), vec![(1, 10), (2, 9), (3, 8)]);
    }
}

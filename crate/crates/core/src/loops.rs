//! Loop decomposition of 3-noncrossing diagrams, cores, L-graphs and the
//! bi-secondary (planarity) test.
//!
//! Pseudoknot loops are built from the arcs that are minimal β-crossing for
//! some arc β, grouped into connected components of their crossing graph.
//! Every other arc closes exactly one hairpin, interior or multi-loop. An
//! unpaired position belongs to the loop owning its ≺-minimal covering arc;
//! positions not covered by any arc are exterior.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::structure::{Arc, Structure, StructureError};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LoopError {
    #[error("structure contains {crossing} mutually crossing arcs; at most 2 are supported")]
    NotThreeNoncrossing { crossing: usize },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LoopKind {
    Hairpin,
    Interior,
    Multi,
    Pseudoknot,
}

impl LoopKind {
    pub fn name(self) -> &'static str {
        match self {
            LoopKind::Hairpin => "hairpin",
            LoopKind::Interior => "interior",
            LoopKind::Multi => "multi",
            LoopKind::Pseudoknot => "pseudoknot",
        }
    }
}

impl fmt::Display for LoopKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Loop {
    pub kind: LoopKind,
    /// The closing arc, or the arc set `P` of a pseudoknot.
    pub arcs: Vec<Arc>,
    pub unpaired: Vec<usize>,
    /// Extreme positions touched by the loop's arcs.
    pub span: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopDecomposition {
    n: usize,
    loops: Vec<Loop>,
    /// Owning loop per arc, parallel to `Structure::arcs`.
    arc_owner: Vec<usize>,
    /// Owning loop per position for unpaired positions; `None` for paired or
    /// exterior positions. Index 0 unused.
    unpaired_owner: Vec<Option<usize>>,
    exterior: Vec<usize>,
}

impl LoopDecomposition {
    pub fn loops(&self) -> &[Loop] {
        &self.loops
    }

    pub fn len(&self) -> usize {
        self.loops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.loops.is_empty()
    }

    /// Loop owning the arc with the given index in `Structure::arcs`.
    pub fn loop_of_arc(&self, arc_index: usize) -> usize {
        self.arc_owner[arc_index]
    }

    /// Loop owning an unpaired position; `None` when exterior or paired.
    pub fn loop_of_unpaired(&self, w: usize) -> Option<usize> {
        self.unpaired_owner[w]
    }

    pub fn exterior(&self) -> &[usize] {
        &self.exterior
    }

    pub fn count(&self, kind: LoopKind) -> usize {
        self.loops.iter().filter(|l| l.kind == kind).count()
    }

    pub fn positions(&self) -> usize {
        self.n
    }

    /// One loop per line: `kind<TAB>arcs<TAB>unpaired`, `-` for an empty list.
    /// A trailing `exterior` line lists uncovered positions when there are any.
    pub fn dump(&self) -> String {
        fn list<T, F: Fn(&T) -> String>(xs: &[T], f: F) -> String {
            if xs.is_empty() {
                "-".to_string()
            } else {
                xs.iter().map(f).collect::<Vec<_>>().join(",")
            }
        }
        let mut out = String::new();
        for l in &self.loops {
            out.push_str(&format!(
                "{}\t{}\t{}\n",
                l.kind,
                list(&l.arcs, |a| format!("{}-{}", a.i, a.j)),
                list(&l.unpaired, |w| w.to_string())
            ));
        }
        if !self.exterior.is_empty() {
            out.push_str(&format!(
                "exterior\t-\t{}\n",
                list(&self.exterior, |w| w.to_string())
            ));
        }
        out
    }
}

/// Indices of arcs crossing each arc.
pub(crate) fn crossing_lists(arcs: &[Arc]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); arcs.len()];
    for x in 0..arcs.len() {
        for y in x + 1..arcs.len() {
            if arcs[y].i >= arcs[x].j {
                break;
            }
            if arcs[x].crosses(&arcs[y]) {
                out[x].push(y);
                out[y].push(x);
            }
        }
    }
    out
}

fn minimal_among(arcs: &[Arc], candidates: &[usize]) -> Vec<usize> {
    candidates
        .iter()
        .copied()
        .filter(|&x| !candidates.iter().any(|&y| arcs[y].nested_in(&arcs[x])))
        .collect()
}

/// The ≺-minimal arcs among those crossing `beta`.
pub fn minimal_beta_crossing(s: &Structure, beta: Arc) -> Result<Vec<Arc>, StructureError> {
    if !s.contains_arc(beta) {
        return Err(StructureError::ArcNotInStructure {
            i: beta.i,
            j: beta.j,
        });
    }
    let arcs = s.arcs();
    let crossing: Vec<usize> = (0..arcs.len())
        .filter(|&x| arcs[x].crosses(&beta))
        .collect();
    Ok(minimal_among(arcs, &crossing)
        .into_iter()
        .map(|x| arcs[x])
        .collect())
}

/// Flags arcs that are minimal β-crossing for at least one β.
pub(crate) fn minimal_crossing_flags(arcs: &[Arc], crossing: &[Vec<usize>]) -> Vec<bool> {
    let mut flag = vec![false; arcs.len()];
    for list in crossing {
        for x in minimal_among(arcs, list) {
            flag[x] = true;
        }
    }
    flag
}

/// Connected components of the graph restricted to `keep`, labelled in order
/// of their smallest arc index. Unkept arcs get `None`.
pub(crate) fn components(adj: &[Vec<usize>], keep: &[bool]) -> (Vec<Option<usize>>, usize) {
    let mut label = vec![None; adj.len()];
    let mut next = 0;
    for start in 0..adj.len() {
        if !keep[start] || label[start].is_some() {
            continue;
        }
        label[start] = Some(next);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if keep[y] && label[y].is_none() {
                    label[y] = Some(next);
                    queue.push_back(y);
                }
            }
        }
        next += 1;
    }
    (label, next)
}

/// Number of pseudoknot loops, without building the full decomposition.
pub fn count_pseudoknots(s: &Structure) -> usize {
    knot_count(s.arcs())
}

/// Same as `count_pseudoknots` for a sorted arc list.
pub(crate) fn knot_count(arcs: &[Arc]) -> usize {
    let crossing = crossing_lists(arcs);
    if crossing.iter().all(Vec::is_empty) {
        return 0;
    }
    let flags = minimal_crossing_flags(arcs, &crossing);
    components(&crossing, &flags).1
}

enum Owner {
    Nested(usize),
    Knot(usize),
}

/// Partitions the arcs and unpaired positions of `s` into loops.
pub fn decompose_loops(s: &Structure) -> Result<LoopDecomposition, LoopError> {
    let crossing_number = s.crossing_number();
    if crossing_number > 2 {
        return Err(LoopError::NotThreeNoncrossing {
            crossing: crossing_number,
        });
    }
    let arcs = s.arcs();
    let crossing = crossing_lists(arcs);
    let in_knot = minimal_crossing_flags(arcs, &crossing);
    let (knot_label, knots) = components(&crossing, &in_knot);

    // Loop creation ordered by left extreme; left extremes are distinct.
    let mut owners: Vec<(usize, Owner)> = Vec::new();
    let mut knot_arcs: Vec<Vec<Arc>> = vec![Vec::new(); knots];
    for (x, a) in arcs.iter().enumerate() {
        match knot_label[x] {
            Some(k) => {
                if knot_arcs[k].is_empty() {
                    owners.push((a.i, Owner::Knot(k)));
                }
                knot_arcs[k].push(*a);
            }
            None => owners.push((a.i, Owner::Nested(x))),
        }
    }
    owners.sort_by_key(|(l, _)| *l);

    let mut loops = Vec::with_capacity(owners.len());
    let mut nested_index = vec![usize::MAX; arcs.len()];
    let mut knot_index = vec![usize::MAX; knots];
    for (_, owner) in &owners {
        let id = loops.len();
        match *owner {
            Owner::Nested(x) => {
                nested_index[x] = id;
                loops.push(Loop {
                    kind: nested_kind(s, x),
                    arcs: vec![arcs[x]],
                    unpaired: Vec::new(),
                    span: (arcs[x].i, arcs[x].j),
                });
            }
            Owner::Knot(k) => {
                knot_index[k] = id;
                let p = &knot_arcs[k];
                let lo = p.iter().map(|a| a.i).min().unwrap_or(0);
                let hi = p.iter().map(|a| a.j).max().unwrap_or(0);
                loops.push(Loop {
                    kind: LoopKind::Pseudoknot,
                    arcs: p.clone(),
                    unpaired: Vec::new(),
                    span: (lo, hi),
                });
            }
        }
    }
    let owner_of = |x: usize| match knot_label[x] {
        Some(k) => knot_index[k],
        None => nested_index[x],
    };
    let arc_owner: Vec<usize> = (0..arcs.len()).map(owner_of).collect();

    let mut unpaired_owner = vec![None; s.len() + 1];
    let mut exterior = Vec::new();
    for w in s.unpaired_positions() {
        let covering: Vec<usize> = (0..arcs.len()).filter(|&x| arcs[x].covers(w)).collect();
        let minimal = minimal_among(arcs, &covering);
        let owner = if minimal.is_empty() {
            None
        } else if let Some(&x) = minimal.iter().find(|&&x| in_knot[x]) {
            Some(owner_of(x))
        } else {
            // Two crossing non-knot arcs can both be minimal; the later-starting
            // one owns the position. `minimal` is in arc order.
            Some(owner_of(*minimal.last().expect("nonempty")))
        };
        match owner {
            Some(id) => {
                unpaired_owner[w] = Some(id);
                loops[id].unpaired.push(w);
            }
            None => exterior.push(w),
        }
    }

    Ok(LoopDecomposition {
        n: s.len(),
        loops,
        arc_owner,
        unpaired_owner,
        exterior,
    })
}

/// Kind of the loop closed by the (non-pseudoknot) arc with index `x`.
fn nested_kind(s: &Structure, x: usize) -> LoopKind {
    let a = s.arcs()[x];
    let inner_paired = (a.i + 1..a.j).any(|w| s.is_paired(w));
    if !inner_paired {
        return LoopKind::Hairpin;
    }
    // children: arcs nested in `a`, maximal among those
    let nested: Vec<Arc> = s
        .arcs()
        .iter()
        .copied()
        .filter(|b| b.nested_in(&a))
        .collect();
    let children: Vec<Arc> = nested
        .iter()
        .copied()
        .filter(|b| !nested.iter().any(|c| b.nested_in(c)))
        .collect();
    if let [child] = children[..] {
        let gaps_unpaired = (a.i + 1..child.i)
            .chain(child.j + 1..a.j)
            .all(|w| !s.is_paired(w));
        if gaps_unpaired {
            return LoopKind::Interior;
        }
    }
    LoopKind::Multi
}

/// Undirected crossing graph on the arcs of a diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LGraph {
    pub vertices: Vec<Arc>,
    pub adjacency: Vec<Vec<usize>>,
}

impl LGraph {
    pub fn of(s: &Structure) -> Self {
        LGraph {
            vertices: s.arcs().to_vec(),
            adjacency: crossing_lists(s.arcs()),
        }
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.adjacency[x].contains(&y)
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        components(&self.adjacency, &vec![true; self.vertices.len()]).1 == 1
    }

    /// Two-colouring of the vertices, if one exists.
    pub fn two_coloring(&self) -> Option<Vec<u8>> {
        let mut color: Vec<Option<u8>> = vec![None; self.vertices.len()];
        for start in 0..self.vertices.len() {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(0);
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                let cx = color[x].expect("coloured before enqueue");
                for &y in &self.adjacency[x] {
                    match color[y] {
                        None => {
                            color[y] = Some(1 - cx);
                            queue.push_back(y);
                        }
                        Some(cy) if cy == cx => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.unwrap_or(0)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreAndLGraph {
    pub core: Structure,
    pub lgraph: LGraph,
}

/// Collapses every stack to its outermost arc and drops the freed positions.
pub fn core(s: &Structure) -> Structure {
    let mut keep = vec![true; s.len() + 1];
    for st in s.stacks() {
        for a in &st.arcs[1..] {
            keep[a.i] = false;
            keep[a.j] = false;
        }
    }
    let mut relabel = vec![0; s.len() + 1];
    let mut next = 0;
    for w in 1..=s.len() {
        if keep[w] {
            next += 1;
            relabel[w] = next;
        }
    }
    let arcs = s
        .arcs()
        .iter()
        .filter(|a| keep[a.i])
        .map(|a| (relabel[a.i], relabel[a.j]));
    Structure::from_arcs(next, arcs).expect("collapsing stacks keeps a valid diagram")
}

/// Core of `s` with the crossing graph of the core's arcs.
pub fn l_graph(s: &Structure) -> CoreAndLGraph {
    let core = core(s);
    let lgraph = LGraph::of(&core);
    CoreAndLGraph { core, lgraph }
}

/// The core has no noncrossing arcs and its L-graph is connected. A diagram
/// needs at least one crossing to qualify.
pub fn is_skeleton(s: &Structure) -> bool {
    let CoreAndLGraph { lgraph, .. } = l_graph(s);
    !lgraph.vertices.is_empty()
        && lgraph.adjacency.iter().all(|n| !n.is_empty())
        && lgraph.is_connected()
}

/// Bi-secondary test: the arcs split into two noncrossing families.
pub fn is_planar(s: &Structure) -> bool {
    LGraph::of(s).two_coloring().is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::parse_structure;

    fn st(t: &str) -> Structure {
        parse_structure(t).unwrap()
    }

    #[test]
    fn stem_loop_is_hairpin_plus_interiors() {
        let d = decompose_loops(&st("((((::::))))")).unwrap();
        assert_eq!(d.count(LoopKind::Hairpin), 1);
        assert_eq!(d.count(LoopKind::Interior), 3);
        assert_eq!(d.len(), 4);
        let hairpin = d
            .loops()
            .iter()
            .find(|l| l.kind == LoopKind::Hairpin)
            .unwrap();
        assert_eq!(hairpin.arcs, vec![Arc::new(4, 9)]);
        assert_eq!(hairpin.unpaired, vec![5, 6, 7, 8]);
    }

    #[test]
    fn arcless_has_no_loops() {
        let d = decompose_loops(&Structure::unpaired(6)).unwrap();
        assert!(d.is_empty());
        assert_eq!(d.exterior(), &[1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn h_type_knot_uses_innermost_arcs() {
        let d = decompose_loops(&st("((([[[:::)))]]]")).unwrap();
        assert_eq!(d.count(LoopKind::Pseudoknot), 1);
        assert_eq!(d.count(LoopKind::Interior), 4);
        let pk = d
            .loops()
            .iter()
            .find(|l| l.kind == LoopKind::Pseudoknot)
            .unwrap();
        assert_eq!(pk.arcs, vec![Arc::new(3, 10), Arc::new(6, 13)]);
        assert_eq!(pk.unpaired, vec![7, 8, 9]);
        assert_eq!(pk.span, (3, 13));
    }

    #[test]
    fn rejects_three_crossing() {
        let s = Structure::from_arcs(11, [(1, 7), (4, 9), (5, 11)]).unwrap();
        assert_eq!(
            decompose_loops(&s),
            Err(LoopError::NotThreeNoncrossing { crossing: 3 })
        );
    }

    #[test]
    fn minimal_crossing_examples() {
        let s = Structure::from_arcs(15, [(1, 12), (4, 15)]).unwrap();
        assert_eq!(
            minimal_beta_crossing(&s, Arc::new(1, 12)).unwrap(),
            vec![Arc::new(4, 15)]
        );
        let s = Structure::from_arcs(15, [(1, 10), (4, 15), (5, 14)]).unwrap();
        assert_eq!(
            minimal_beta_crossing(&s, Arc::new(1, 10)).unwrap(),
            vec![Arc::new(5, 14)]
        );
        let s = Structure::from_arcs(10, [(1, 10)]).unwrap();
        assert!(minimal_beta_crossing(&s, Arc::new(1, 10))
            .unwrap()
            .is_empty());
        assert!(matches!(
            minimal_beta_crossing(&s, Arc::new(2, 9)),
            Err(StructureError::ArcNotInStructure { i: 2, j: 9 })
        ));
    }

    #[test]
    fn asymmetric_minimal_crossing() {
        // (5,14) is minimal (1,10)-crossing, but (1,10) is not minimal
        // (5,14)-crossing because (2,8) ≺ (1,10) also crosses it.
        let s = Structure::from_arcs(15, [(1, 10), (2, 8), (5, 14)]).unwrap();
        assert_eq!(
            minimal_beta_crossing(&s, Arc::new(1, 10)).unwrap(),
            vec![Arc::new(5, 14)]
        );
        assert_eq!(
            minimal_beta_crossing(&s, Arc::new(5, 14)).unwrap(),
            vec![Arc::new(2, 8)]
        );
    }

    #[test]
    fn core_collapses_stacks() {
        let s = st("(((::::)))");
        let c = core(&s);
        assert_eq!(c.len(), 6);
        assert_eq!(c.arcs(), &[Arc::new(1, 6)]);
        assert_eq!(core(&Structure::unpaired(5)), Structure::unpaired(5));
    }

    #[test]
    fn lgraph_examples() {
        let crossing = Structure::from_arcs(8, [(1, 5), (3, 8)]).unwrap();
        let g = LGraph::of(&crossing);
        assert_eq!(g.edge_count(), 1);
        assert!(g.is_connected());
        assert!(is_skeleton(&crossing));

        let nested = Structure::from_arcs(8, [(1, 8), (3, 6)]).unwrap();
        assert_eq!(LGraph::of(&nested).edge_count(), 0);
        assert!(!is_skeleton(&nested));

        let h = l_graph(&st("((([[[:::)))]]]"));
        assert_eq!(h.core.arcs(), &[Arc::new(1, 6), Arc::new(2, 7)]);
        assert_eq!(h.lgraph.edge_count(), 1);
        assert!(is_skeleton(&st("((([[[:::)))]]]")));
    }

    #[test]
    fn planarity() {
        assert!(is_planar(&st("((::))::((::))")));
        assert!(is_planar(&st("((([[[:::)))]]]")));
        // crossing graph is the 5-cycle a1-a2-a3-a4-a5
        let c5 = Structure::from_arcs(10, [(1, 4), (3, 6), (5, 8), (7, 10), (2, 9)]).unwrap();
        assert_eq!(c5.crossing_number(), 2);
        assert!(!is_planar(&c5));
    }
}

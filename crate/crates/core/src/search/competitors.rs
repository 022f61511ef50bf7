//! Start sequences, arc perturbations, competitor sets and the mutation step.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::oracle::FoldRanking;
use crate::sequence::{can_pair, compatible_unchecked, Base, BasePair, Sequence};
use crate::structure::{Arc, Structure, StructureError};

/// Uniform draw from the sequences compatible with `target`: every unpaired
/// position from the four bases, every arc from the six pairs.
pub fn make_start<R: Rng + ?Sized>(target: &Structure, rng: &mut R) -> Sequence {
    let mut bases = vec![Base::A; target.len()];
    for w in 1..=target.len() {
        let v = target.partner(w);
        if v == 0 {
            bases[w - 1] = Base::ALL[rng.gen_range(0..4)];
        } else if w < v {
            let (x, y) = BasePair::ALL[rng.gen_range(0..6)].bases();
            bases[w - 1] = x;
            bases[v - 1] = y;
        }
    }
    Sequence::new(bases)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Perturbation {
    Keep,
    /// Endpoint offsets, each in `-1..=1`, not both zero.
    Shift {
        dl: i8,
        dr: i8,
    },
    Remove,
}

/// A perturbed arc list. It may pair a position twice; see `into_structure`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub n: usize,
    pub arcs: Vec<Arc>,
    pub edit: Perturbation,
}

impl Candidate {
    /// `None` for inconsistent candidates (a doubly paired position or an
    /// arc `(i, i + 1)`).
    pub fn into_structure(self) -> Option<Structure> {
        Structure::from_arcs(self.n, self.arcs.iter().map(|a| (a.i, a.j))).ok()
    }
}

/// The ten edits of `a` in `s`: keep it, move its endpoints by at most one
/// (eight ways) or remove it. Shifts that leave `1..=n` or invert the arc are
/// dropped; collisions with other arcs are kept for the caller to filter.
pub fn perturb_arc(s: &Structure, a: Arc) -> Result<Vec<Candidate>, StructureError> {
    if !s.contains_arc(a) {
        return Err(StructureError::ArcNotInStructure { i: a.i, j: a.j });
    }
    let n = s.len();
    let others: Vec<Arc> = s.arcs().iter().copied().filter(|&b| b != a).collect();
    let with = |extra: Option<Arc>, edit| {
        let mut arcs = others.clone();
        if let Some(x) = extra {
            arcs.push(x);
            arcs.sort_unstable();
        }
        Candidate { n, arcs, edit }
    };
    let mut out = vec![with(Some(a), Perturbation::Keep)];
    for dl in -1i8..=1 {
        for dr in -1i8..=1 {
            if dl == 0 && dr == 0 {
                continue;
            }
            let l = a.i as isize + dl as isize;
            let r = a.j as isize + dr as isize;
            if l < 1 || r > n as isize || l >= r {
                continue;
            }
            out.push(with(
                Some(Arc::new(l as usize, r as usize)),
                Perturbation::Shift { dl, dr },
            ));
        }
    }
    out.push(with(None, Perturbation::Remove));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Competitor {
    pub structure: Structure,
    /// Ranking index and arc index of the first edit that produced it.
    pub origin: (usize, usize),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CompetitorSet {
    pub competitors: Vec<Competitor>,
    /// Candidates generated before any filtering.
    pub raw: usize,
}

impl CompetitorSet {
    pub fn len(&self) -> usize {
        self.competitors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.competitors.is_empty()
    }

    pub fn structures(&self) -> impl Iterator<Item = &Structure> {
        self.competitors.iter().map(|c| &c.structure)
    }
}

/// Perturbs every arc of every ranked structure and keeps the distinct,
/// consistent candidates compatible with `seq` that differ from `target`.
pub fn build_competitors(
    ranking: &FoldRanking,
    seq: &Sequence,
    target: &Structure,
) -> CompetitorSet {
    let mut seen: HashSet<Vec<Arc>> = HashSet::new();
    let mut set = CompetitorSet::default();
    for (h, entry) in ranking.entries.iter().enumerate() {
        for (x, &a) in entry.structure.arcs().iter().enumerate() {
            let candidates =
                perturb_arc(&entry.structure, a).expect("arc taken from the structure");
            set.raw += candidates.len();
            for c in candidates {
                if c.arcs.as_slice() == target.arcs() || seen.contains(&c.arcs) {
                    continue;
                }
                seen.insert(c.arcs.clone());
                let Some(structure) = c.into_structure() else {
                    continue;
                };
                if !compatible_unchecked(seq, &structure) {
                    continue;
                }
                set.competitors.push(Competitor {
                    structure,
                    origin: (h, x),
                });
            }
        }
    }
    set
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mutation {
    pub sequence: Sequence,
    /// Positions whose base changed.
    pub changed: Vec<usize>,
    /// Start-points where the end-point constraints had to be dropped.
    pub relaxed: usize,
    /// Positions where no choice avoided every competitor pairing.
    pub fallbacks: usize,
}

/// One pass of anti-competitor mutation over all positions of `target`.
///
/// An unpaired position `w` is redrawn so it cannot pair with any competitor
/// partner of `w`. For an arc `(w, v)` a new pair is drawn whose left base
/// cannot pair with any competitor partner of `w` and, where possible, whose
/// right base cannot pair with any competitor partner of `v`. Constraints read
/// the sequence as it was before the pass. End-points are handled with their
/// start-point.
pub fn mutate_against_competitors<R: Rng + ?Sized>(
    seq: &Sequence,
    target: &Structure,
    competitors: &CompetitorSet,
    rng: &mut R,
) -> Mutation {
    let n = target.len();
    let mut out = seq.clone();
    let mut changed = Vec::new();
    let (mut relaxed, mut fallbacks) = (0, 0);
    if competitors.is_empty() {
        return Mutation {
            sequence: out,
            changed,
            relaxed,
            fallbacks,
        };
    }
    // competitor partners of each position that disagree with the target
    let mut foreign: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    let mut differs = vec![false; n + 1];
    for c in competitors.structures() {
        for w in 1..=n {
            let p = c.partner(w);
            if p != target.partner(w) {
                differs[w] = true;
                if p != 0 && !foreign[w].contains(&p) {
                    foreign[w].push(p);
                }
            }
        }
    }
    let avoids = |b: Base, partners: &[usize]| partners.iter().all(|&u| !can_pair(b, seq.base(u)));

    for w in 1..=n {
        let v = target.partner(w);
        if v == 0 {
            if !differs[w] {
                continue;
            }
            let old = seq.base(w);
            let others: Vec<Base> = Base::ALL.into_iter().filter(|&b| b != old).collect();
            let good: Vec<Base> = others
                .iter()
                .copied()
                .filter(|&b| avoids(b, &foreign[w]))
                .collect();
            let pick = if good.is_empty() {
                fallbacks += 1;
                *others.choose(rng).expect("three alternatives")
            } else {
                *good.choose(rng).expect("nonempty")
            };
            out.set(w, pick);
            changed.push(w);
        } else if w < v {
            if !differs[w] && !differs[v] {
                continue;
            }
            let old = seq.pair_at(w, v).expect("sequence compatible with target");
            let others: Vec<BasePair> = BasePair::ALL.into_iter().filter(|&p| p != old).collect();
            let left_ok = |p: &BasePair| avoids(p.bases().0, &foreign[w]);
            let both: Vec<BasePair> = others
                .iter()
                .copied()
                .filter(|p| left_ok(p) && avoids(p.bases().1, &foreign[v]))
                .collect();
            let pick = if let Some(p) = both.choose(rng) {
                *p
            } else {
                let left: Vec<BasePair> = others.iter().copied().filter(left_ok).collect();
                if let Some(p) = left.choose(rng) {
                    relaxed += 1;
                    *p
                } else {
                    fallbacks += 1;
                    *others.choose(rng).expect("five alternatives")
                }
            };
            let (x, y) = pick.bases();
            out.set(w, x);
            out.set(v, y);
            changed.push(w);
            changed.push(v);
        }
    }
    changed.sort_unstable();
    Mutation {
        sequence: out,
        changed,
        relaxed,
        fallbacks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{FoldEntry, FoldRanking};
    use crate::sequence::is_compatible;
    use crate::structure::parse_structure;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ranking(seq: &Sequence, structures: &[Structure]) -> FoldRanking {
        FoldRanking {
            query: seq.clone(),
            entries: structures
                .iter()
                .map(|s| FoldEntry {
                    structure: s.clone(),
                    energy: 0.0,
                })
                .collect(),
        }
    }

    #[test]
    fn ten_edits_for_a_free_arc() {
        let s = Structure::from_arcs(12, [(4, 9)]).unwrap();
        let c = perturb_arc(&s, Arc::new(4, 9)).unwrap();
        assert_eq!(c.len(), 10);
        assert_eq!(c[0].edit, Perturbation::Keep);
        assert_eq!(c[9].edit, Perturbation::Remove);
        assert!(c[9].arcs.is_empty());
    }

    #[test]
    fn boundary_arc_loses_shifts() {
        let s = Structure::from_arcs(9, [(1, 9)]).unwrap();
        let c = perturb_arc(&s, Arc::new(1, 9)).unwrap();
        // no left shift of 1, no right shift of 9
        assert_eq!(c.len(), 5);
        assert!(matches!(
            perturb_arc(&s, Arc::new(2, 8)),
            Err(StructureError::ArcNotInStructure { .. })
        ));
    }

    #[test]
    fn collisions_survive_perturbation_but_not_filtering() {
        let t = parse_structure("(((::::)))").unwrap();
        let c = perturb_arc(&t, Arc::new(2, 9)).unwrap();
        assert_eq!(c.len(), 10);
        let inconsistent = c
            .iter()
            .filter(|x| (*x).clone().into_structure().is_none())
            .count();
        assert!(inconsistent > 0);
    }

    #[test]
    fn competitors_exclude_target_and_invalid() {
        let t = parse_structure("(((::::)))::").unwrap();
        let seq: Sequence = "GGGAAAACCCCC".parse().unwrap();
        let set = build_competitors(&ranking(&seq, std::slice::from_ref(&t)), &seq, &t);
        assert!(!set.is_empty());
        assert_eq!(set.raw, 7 + 10 + 10);
        for s in set.structures() {
            assert_ne!(s, &t);
            assert!(is_compatible(&seq, s).unwrap());
        }
        // shifting (3,8) to (3,9) collides with (2,9), shifting (1,10) to (1,11) is compatible
        assert!(set
            .structures()
            .any(|s| s.arcs() == [Arc::new(1, 11), Arc::new(2, 9), Arc::new(3, 8)]));
    }

    #[test]
    fn empty_competitors_leave_sequence() {
        let t = parse_structure("(((::::)))").unwrap();
        let seq: Sequence = "GGGAAAACCC".parse().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = mutate_against_competitors(&seq, &t, &CompetitorSet::default(), &mut rng);
        assert_eq!(m.sequence, seq);
        assert!(m.changed.is_empty());
    }

    #[test]
    fn unpaired_position_avoids_competitor_partner() {
        // target leaves 1 unpaired; a competitor pairs (1, 8) where s_8 = G
        let t = Structure::unpaired(8);
        let seq: Sequence = "AAAAAAAG".parse().unwrap();
        let comp = Structure::from_arcs(8, [(1, 8)]).unwrap();
        let set = CompetitorSet {
            competitors: vec![Competitor {
                structure: comp,
                origin: (0, 0),
            }],
            raw: 1,
        };
        let mut seen = HashSet::new();
        for seed in 0..200 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = mutate_against_competitors(&seq, &t, &set, &mut rng);
            seen.insert(m.sequence.base(1));
            assert_eq!(m.fallbacks, 0);
        }
        // C and U pair with G; A is the old base
        assert_eq!(seen, HashSet::from([Base::G]));
    }

    #[test]
    fn start_sequences_are_compatible() {
        let t = parse_structure("::(((::[[[::))):::]]]::").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            assert!(is_compatible(&make_start(&t, &mut rng), &t).unwrap());
        }
    }
}

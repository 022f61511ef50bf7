mod common;

use proptest::prelude::*;

use pkinv::loops::is_planar;
use pkinv::structure::{mismatched_positions, StructureError};
use pkinv::{parse_structure, serialize_structure, structure_distance, Structure};

use common::*;

/// Random diagram on `n` positions: pairs drawn from a shuffled list.
fn diagram(max_n: usize) -> impl Strategy<Value = Structure> {
    (4..=max_n)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec((1..=n, 1..=n), 0..n)))
        .prop_map(|(n, pairs)| {
            let mut used = vec![false; n + 1];
            let mut arcs = Vec::new();
            for (x, y) in pairs {
                let (i, j) = (x.min(y), x.max(y));
                if j >= i + 2 && !used[i] && !used[j] {
                    used[i] = true;
                    used[j] = true;
                    arcs.push((i, j));
                }
            }
            structure(n, &arcs)
        })
}

proptest! {
    #[test]
    fn serialization_round_trips(s in diagram(40)) {
        match serialize_structure(&s) {
            Ok(text) => {
                prop_assert_eq!(text.len(), s.len());
                prop_assert_eq!(parse_structure(&text).unwrap(), s);
            }
            Err(e) => {
                prop_assert_eq!(e, StructureError::NotRepresentable);
                prop_assert!(!is_planar(&s));
            }
        }
    }

    #[test]
    fn planar_diagrams_always_serialize(s in diagram(40)) {
        if is_planar(&s) {
            let text = serialize_structure(&s).unwrap();
            prop_assert!(text.chars().all(|c| ":()[]".contains(c)));
        }
    }

    #[test]
    fn distance_is_a_metric(a in diagram(30), b in diagram(30), c in diagram(30)) {
        // bring all three to the shortest length
        let n = a.len().min(b.len()).min(c.len());
        let (a, b, c) = (a.restrict(1, n), b.restrict(1, n), c.restrict(1, n));
        let d = |x: &Structure, y: &Structure| structure_distance(x, y).unwrap();
        prop_assert_eq!(d(&a, &a), 0);
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert_eq!(d(&a, &b) == 0, a == b);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
    }

    #[test]
    fn distance_counts_partner_mismatches(a in diagram(30), b in diagram(30)) {
        let n = a.len().min(b.len());
        let (a, b) = (a.restrict(1, n), b.restrict(1, n));
        let expected: Vec<usize> = (1..=n).filter(|&w| a.partner(w) != b.partner(w)).collect();
        prop_assert_eq!(mismatched_positions(&a, &b).unwrap(), expected);
    }

    #[test]
    fn crossing_number_matches_brute_force(s in diagram(24)) {
        let arcs: Vec<(usize, usize)> = s.arcs().iter().map(|a| (a.i, a.j)).collect();
        prop_assert_eq!(s.crossing_number(), crossing_number_brute(&arcs));
    }
}

#[test]
fn distance_of_shifted_arc() {
    let s1 = structure(24, &[(4, 20)]);
    let s2 = structure(24, &[(4, 17), (18, 22)]);
    let w = mismatched_positions(&s1, &s2).unwrap();
    assert_eq!(w, vec![4, 17, 18, 20, 22]);
    assert_eq!(structure_distance(&s1, &s2).unwrap(), 5);
}

#[test]
fn length_mismatch_is_an_error() {
    let a = Structure::unpaired(5);
    let b = Structure::unpaired(6);
    assert!(matches!(
        structure_distance(&a, &b),
        Err(StructureError::LengthMismatch { .. })
    ));
}

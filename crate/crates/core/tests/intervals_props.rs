mod common;

use proptest::prelude::*;

use pkinv::{decompose_intervals, parse_structure, Structure};

use common::*;

#[test]
fn toy_plan() {
    let plan = decompose_intervals(&parse_structure(":((:):[)]:").unwrap()).unwrap();
    let got: Vec<(usize, usize)> = plan.intervals().iter().map(|i| i.bounds()).collect();
    assert_eq!(got, vec![(3, 5), (3, 6), (2, 9), (1, 10)]);
}

#[test]
fn arcless_target_has_only_the_whole_interval() {
    let plan = decompose_intervals(&Structure::unpaired(12)).unwrap();
    assert_eq!(plan.len(), 1);
    assert_eq!(plan.intervals()[0].bounds(), (1, 12));
}

#[test]
fn single_stem_plan() {
    let plan = decompose_intervals(&parse_structure("::(((::::))):").unwrap()).unwrap();
    assert_eq!(plan.ab_pairs(), vec![((3, 12), (1, 13))]);
}

fn canonical(max_n: usize) -> impl Strategy<Value = Structure> {
    (10..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec((1..=n, 1..=n, 1usize..=3), 0..n / 3),
            )
        })
        .prop_map(|(n, stems)| {
            // stems of up to three stacked arcs, kept 3-noncrossing
            let mut used = vec![false; n + 1];
            let mut arcs: Vec<(usize, usize)> = Vec::new();
            for (x, y, size) in stems {
                let (i, j) = (x.min(y), x.max(y));
                if j < i + 2 * size + 1 {
                    continue;
                }
                let stem: Vec<(usize, usize)> = (0..size).map(|t| (i + t, j - t)).collect();
                if stem.iter().any(|&(p, q)| used[p] || used[q]) {
                    continue;
                }
                let before = arcs.len();
                arcs.extend(&stem);
                if crossing_number_brute(&arcs) >= 3 {
                    arcs.truncate(before);
                    continue;
                }
                for &(p, q) in &stem {
                    used[p] = true;
                    used[q] = true;
                }
            }
            structure(n, &arcs)
        })
}

proptest! {
    #[test]
    fn plan_is_nested_and_ends_with_the_whole(s in canonical(40)) {
        let plan = decompose_intervals(&s).unwrap();
        let last = plan.intervals().last().unwrap();
        prop_assert_eq!(last.bounds(), (1, s.len()));
        for (a, b) in plan.ab_pairs() {
            prop_assert!(b.0 <= a.0 && a.1 <= b.1);
            prop_assert!(b.0 >= 1 && b.1 <= s.len());
        }
        for w in plan.intervals().windows(2) {
            prop_assert_ne!(w[0].bounds(), w[1].bounds());
        }
        // every arc lies inside some interval other than the whole
        for a in s.arcs() {
            prop_assert!(plan.intervals().iter().any(|iv| iv.contains((a.i, a.j))));
        }
    }
}

use std::collections::HashSet;

use av321::perm::{
    avoids_321, contains_pattern, enumerate_avoiders, fixed_point_measures, fixed_points,
    left_to_right_maxima, pattern_from_digits,
};
use av321::sample::uniform_tree;
use av321::tree::{dyck_from_tree, enumerate_trees, tree_fixed_point_measures, tree_from_dyck};
use av321::{perm_to_tree, tree_to_perm, Error, Permutation, PlaneTree, RngStream};
use proptest::prelude::*;

const CATALAN: [usize; 10] = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862];

#[test]
fn avoider_counts_are_catalan() {
    for pat in ["321", "132", "213", "123", "231", "312"] {
        let p = pattern_from_digits(pat).unwrap();
        for n in 1..=8 {
            assert_eq!(
                enumerate_avoiders(n, &p).unwrap().count(),
                CATALAN[n],
                "{pat} n={n}"
            );
        }
    }
}

#[test]
fn enumeration_is_lexicographic_and_avoiding() {
    let p = pattern_from_digits("321").unwrap();
    let all: Vec<Permutation> = enumerate_avoiders(7, &p).unwrap().collect();
    assert!(all.windows(2).all(|w| w[0].values() < w[1].values()));
    assert!(all.iter().all(avoids_321));
}

#[test]
fn bijection_is_exhaustively_bijective() {
    let p = pattern_from_digits("321").unwrap();
    for v in 2..=9 {
        let images: HashSet<Vec<u32>> = enumerate_trees(v)
            .unwrap()
            .map(|t| {
                let perm = tree_to_perm(&t).unwrap();
                assert_eq!(perm_to_tree(&perm).unwrap(), t);
                perm.into_vec()
            })
            .collect();
        let avoiders: HashSet<Vec<u32>> = enumerate_avoiders(v - 1, &p)
            .unwrap()
            .map(|q| q.into_vec())
            .collect();
        assert_eq!(images, avoiders, "v={v}");
    }
}

#[test]
fn fixed_points_read_off_the_tree() {
    for v in 2..=9 {
        for t in enumerate_trees(v).unwrap() {
            let perm = tree_to_perm(&t).unwrap();
            assert_eq!(
                tree_fixed_point_measures(&t).unwrap(),
                fixed_point_measures(&perm)
            );
        }
    }
}

#[test]
fn large_random_trees_agree_on_fixed_point_measures() {
    let mut rng = RngStream::new(2024, 0);
    for i in 0..10_000u64 {
        let v = 500 + (rng.below(1501) as usize);
        let t = uniform_tree(v, &mut rng).unwrap();
        let perm = tree_to_perm(&t).unwrap();
        assert!(avoids_321(&perm), "tree {i}");
        assert_eq!(
            tree_fixed_point_measures(&t).unwrap(),
            fixed_point_measures(&perm),
            "tree {i}"
        );
    }
}

fn tree_strategy() -> impl Strategy<Value = PlaneTree> {
    (2usize..300, any::<u64>())
        .prop_map(|(v, seed)| uniform_tree(v, &mut RngStream::new(seed, 0)).unwrap())
}

fn perm_strategy(max: usize) -> impl Strategy<Value = Permutation> {
    (1..=max)
        .prop_flat_map(|n| Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|v| Permutation::new(v).unwrap())
}

proptest! {
    #[test]
    fn tree_round_trips(t in tree_strategy()) {
        let perm = tree_to_perm(&t).unwrap();
        prop_assert_eq!(perm.len() + 1, t.vertex_count());
        prop_assert!(avoids_321(&perm));
        prop_assert_eq!(perm_to_tree(&perm).unwrap(), t.clone());
        prop_assert_eq!(tree_from_dyck(&dyck_from_tree(&t)), t.clone());
        prop_assert_eq!(t.to_string().parse::<PlaneTree>().unwrap(), t);
    }

    #[test]
    fn linear_321_test_matches_search(p in perm_strategy(9)) {
        let pat = pattern_from_digits("321").unwrap();
        prop_assert_eq!(avoids_321(&p), !contains_pattern(&p, &pat).unwrap());
    }

    #[test]
    fn perm_to_tree_rejects_exactly_the_containers(p in perm_strategy(12)) {
        match perm_to_tree(&p) {
            Ok(t) => {
                prop_assert!(avoids_321(&p));
                prop_assert_eq!(tree_to_perm(&t).unwrap(), p);
            }
            Err(e) => {
                prop_assert_eq!(e, Error::Contains321);
                prop_assert!(!avoids_321(&p));
            }
        }
    }

    #[test]
    fn front_and_back_partition_the_fixed_points(p in perm_strategy(40)) {
        let n = p.len() as u64;
        let (front, back) = fixed_point_measures(&p);
        let mut all: Vec<u64> = front.positions().to_vec();
        all.extend(back.positions().iter().rev().map(|&b| n + 1 - b));
        prop_assert_eq!(all, fixed_points(&p).positions().to_vec());
        prop_assert!(front.positions().iter().all(|&i| i <= n / 2));
    }

    #[test]
    fn maxima_positions_hold_increasing_values(p in perm_strategy(30)) {
        let (pos, vals) = left_to_right_maxima(&p);
        prop_assert_eq!(pos[0], 1);
        prop_assert!(vals.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(*vals.last().unwrap() as usize, p.len());
    }

    #[test]
    fn permutation_text_round_trips(p in perm_strategy(30)) {
        prop_assert_eq!(p.to_string().parse::<Permutation>().unwrap(), p);
    }
}

use std::collections::HashSet;

use itertools::Itertools;
use matro_core::boolean::{BooleanFamily, FTree};
use matro_core::SubsetMask;
use proptest::prelude::*;

fn arb_family() -> impl Strategy<Value = (usize, Vec<SubsetMask>)> {
    (2usize..=6).prop_flat_map(|r| {
        let sets = prop::collection::vec(1u64..(1 << r), 0..6)
            .prop_map(|v| v.into_iter().map(SubsetMask).collect::<Vec<_>>());
        (Just(r), sets)
    })
}

/// `x` belongs to the smallest building set over `generators` exactly when
/// the generators inside `x` have an intersection-connected part covering it.
fn is_connected_union(x: SubsetMask, generators: &[SubsetMask]) -> bool {
    let inside: Vec<SubsetMask> = generators.iter().copied().filter(|g| g.is_subset(x)).collect();
    let Some(&seed) = inside.iter().find(|g| g.contains(x.min_element().unwrap())) else {
        return false;
    };
    let mut reach = seed;
    loop {
        let grown = inside
            .iter()
            .filter(|g| !g.is_disjoint(reach))
            .fold(reach, |a, &g| a.union(g));
        if grown == reach {
            return reach == x;
        }
        reach = grown;
    }
}

/// Nestedness by the laminar characterization: members pairwise nested or
/// disjoint, and no union of two or more disjoint members in the family.
fn laminar_nested(family: &BooleanFamily, candidate: &[SubsetMask]) -> bool {
    let laminar = candidate
        .iter()
        .tuple_combinations()
        .all(|(a, b)| a.is_subset(*b) || b.is_subset(*a) || a.is_disjoint(*b));
    laminar
        && (2..=candidate.len()).all(|k| {
            candidate.iter().combinations(k).all(|group| {
                !group.iter().tuple_combinations().all(|(a, b)| a.is_disjoint(**b))
                    || !family.contains(group.iter().fold(SubsetMask::EMPTY, |u, g| u.union(**g)))
            })
        })
}

/// All nested sets (without the top) by depth-first extension.
fn brute_force_nested(family: &BooleanFamily) -> Vec<Vec<SubsetMask>> {
    let pool: Vec<SubsetMask> = family.sets().iter().copied().filter(|&s| s != family.top()).collect();
    let mut out = vec![Vec::new()];
    let mut stack = vec![(Vec::new(), 0usize)];
    while let Some((chosen, start)) = stack.pop() {
        for k in start..pool.len() {
            let mut next: Vec<SubsetMask> = chosen.clone();
            next.push(pool[k]);
            let oracle = laminar_nested(family, &next);
            assert_eq!(family.is_nested(&next), oracle, "{next:?}");
            if oracle {
                out.push(next.clone());
                stack.push((next, k + 1));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn building_closure_is_the_set_of_connected_unions((r, sets) in arb_family()) {
        let family = BooleanFamily::new(r, sets.clone()).unwrap();
        let closure = family.building_closure();
        prop_assert!(closure.is_building());
        let generators: Vec<SubsetMask> =
            sets.iter().copied().chain((0..r).map(SubsetMask::singleton)).collect();
        for x in (1u64..1 << r).map(SubsetMask) {
            prop_assert_eq!(closure.contains(x), is_connected_union(x, &generators), "{}", x);
        }
        prop_assert_eq!(closure.building_closure(), closure.clone());
    }

    #[test]
    fn maximal_nested_sets_match_brute_force((r, mut sets) in arb_family()) {
        sets.push(SubsetMask::full(r));
        let family = BooleanFamily::new(r, sets).unwrap().building_closure();
        let all = brute_force_nested(&family);
        let as_sets: HashSet<Vec<SubsetMask>> = all
            .iter()
            .map(|s| { let mut s = s.clone(); s.sort_unstable(); s })
            .collect();
        let mut maximal: Vec<Vec<SubsetMask>> = as_sets
            .iter()
            .filter(|s| {
                family.sets().iter().all(|g| {
                    *g == family.top() || s.contains(g) || {
                        let mut bigger = (*s).clone();
                        bigger.push(*g);
                        !laminar_nested(&family, &bigger)
                    }
                })
            })
            .cloned()
            .collect();
        maximal.sort();
        prop_assert!(maximal.iter().all(|s| s.len() == r - 1));
        prop_assert_eq!(family.maximal_nested_sets().unwrap(), maximal);
    }

    #[test]
    fn f_trees_round_trip((r, mut sets) in arb_family()) {
        sets.push(SubsetMask::full(r));
        let family = BooleanFamily::new(r, sets).unwrap().building_closure();
        for nested in brute_force_nested(&family) {
            let mut with_top = nested.clone();
            with_top.push(family.top());
            let tree = family.tree_from_nested(&with_top).unwrap();
            prop_assert!(tree.is_tree_of(&family));
            prop_assert_eq!(tree.len(), nested.len() + 1);
            let mut expected = nested.clone();
            expected.sort_unstable();
            prop_assert_eq!(tree.sets(), expected);
            let labels: Vec<SubsetMask> = tree.nodes().iter().map(|n| n.label).collect();
            prop_assert!(labels.iter().all(|l| !l.is_empty()));
            prop_assert_eq!(labels.iter().fold(SubsetMask::EMPTY, |a, &l| a.union(l)), family.top());
            let rebuilt = FTree::from_laminar(family.top(), &tree.sets()).unwrap();
            prop_assert_eq!(rebuilt, tree);
        }
    }

    #[test]
    fn delta_vertices_satisfy_their_facet_inequalities((r, mut sets) in arb_family(), seed in any::<u64>()) {
        sets.push(SubsetMask::full(r));
        let family = BooleanFamily::new(r, sets).unwrap().building_closure();
        let mut order: Vec<usize> = (0..r).collect();
        // A seed-driven shuffle.
        let mut s = seed;
        for i in (1..r).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let v = family.delta_vertex(&order).unwrap();
        prop_assert_eq!(v.iter().sum::<usize>(), family.len());
        for &g in family.sets() {
            let lhs: usize = g.iter().map(|e| v[e]).sum();
            prop_assert!(lhs >= family.delta_facet_rhs(g));
        }
    }
}

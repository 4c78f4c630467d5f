mod common;

use std::collections::{BTreeSet, HashSet};

use common::*;
use matro_core::bergman::{
    bergman_membership, euler_characteristic, BergmanComplex, BuildingChoice, SetPartition,
};
use matro_core::lattice::FlatsLattice;
use matro_core::{Matroid, SubsetMask, WeightVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

fn small_corpus() -> Vec<(&'static str, Matroid)> {
    vec![
        ("u24", u24()),
        ("k4", k4()),
        ("k4e", k4_minus_edge()),
        ("cube6", cube6()),
        ("cube8", cube_vectors(3)),
    ]
}

fn corpus() -> Vec<(&'static str, Matroid)> {
    let mut all = small_corpus();
    all.push(("r10", r10()));
    all.push(("mk5dual", k5_dual()));
    all
}

/// Facets straight from the definition: every weight vector with values in
/// `0..r` (an ordered partition into at most `r` levels) whose face matroid
/// is loop-free with `r` components.
fn brute_force_facets(m: &Matroid) -> Vec<SetPartition> {
    let (n, r) = (m.ground_size(), m.rank());
    let mut found = HashSet::new();
    let mut w = vec![0i64; n];
    loop {
        let mw = m.max_weight_integer(&w).unwrap();
        if !mw.has_loops() && mw.num_components() == r {
            found.insert(SetPartition::new(mw.connected_components().blocks));
        }
        let mut k = 0;
        while k < n && w[k] == r as i64 - 1 {
            w[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
        w[k] += 1;
    }
    let mut out: Vec<_> = found.into_iter().collect();
    out.sort();
    out
}

/// Möbius value by inverting the zeta matrix of the flat poset.
fn zeta_mobius(lattice: &FlatsLattice) -> i64 {
    let flats = lattice.flats();
    let len = flats.len();
    // mu[j] = μ(0̂, flats[j]); flats are sorted by rank, so below comes first.
    let mut mu = vec![0i64; len];
    for j in 0..len {
        mu[j] = if j == 0 {
            1
        } else {
            -(0..j).filter(|&i| flats[i].mask.is_subset(flats[j].mask)).map(|i| mu[i]).sum::<i64>()
        };
    }
    mu[len - 1]
}

#[test]
fn facets_agree_with_brute_force_oracle() {
    for (name, m) in small_corpus() {
        let facets = BergmanComplex::new(&m).unwrap().facets().unwrap();
        assert_eq!(facets, brute_force_facets(&m), "{name}");
        assert!(facets.iter().all(|f| f.len() == m.rank() && f.is_partition_of(m.ground_size())));
    }
}

#[test]
fn membership_matches_loop_free_face_matroid() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for (name, m) in corpus() {
        let n = m.ground_size();
        let lattice = FlatsLattice::new(&m);
        let mut samples: Vec<WeightVector> = lattice
            .flats()
            .iter()
            .map(|f| WeightVector::from_integers((0..n).map(|e| f.mask.contains(e) as i64)))
            .collect();
        for _ in 0..1000 {
            // Few distinct values keep ties, so lower faces get hit too.
            let den = rng.random_range(1..=3i64);
            samples.push(WeightVector(
                (0..n)
                    .map(|_| BigRational::new(BigInt::from(rng.random_range(-3..=3i64)), BigInt::from(den)))
                    .collect(),
            ));
        }
        let mut inside = 0;
        for w in &samples {
            let member = bergman_membership(&m, w).unwrap();
            assert_eq!(member, !m.max_weight_matroid(w).unwrap().has_loops(), "{name} {w}");
            inside += member as usize;
        }
        assert!(inside > 0, "{name}: no sample landed in the fan");
    }
}

#[test]
fn euler_characteristic_is_the_mobius_value() {
    for (name, m) in corpus() {
        let b = BergmanComplex::new(&m).unwrap();
        let mu = b.lattice().mobius();
        assert_eq!(mu, zeta_mobius(b.lattice()), "{name}");
        let sign = if m.rank() % 2 == 0 { 1 } else { -1 };
        assert_eq!(mu.signum(), sign, "{name}");
        let fv = b.nested_f_vector(&BuildingChoice::Minimal).unwrap();
        assert_eq!(euler_characteristic(&fv), mu, "{name}");
        assert_eq!(euler_characteristic(&b.bergman_f_vector().unwrap()), mu, "{name}");
    }
}

#[test]
fn connected_flats_match_component_count_oracle() {
    for (name, m) in corpus() {
        let b = BergmanComplex::new(&m).unwrap();
        let expected: Vec<SubsetMask> = b
            .lattice()
            .flats()
            .iter()
            .filter(|f| !f.mask.is_empty() && f.mask != m.ground_set())
            .filter(|f| {
                // A flat is connected when no proper nonempty part splits its rank.
                let elems: Vec<usize> = f.mask.iter().collect();
                (1u64..(1 << elems.len()) - 1).all(|bits| {
                    let part: SubsetMask =
                        elems.iter().enumerate().filter(|(k, _)| bits >> k & 1 == 1).map(|(_, &e)| e).collect();
                    m.rank_of(part) + m.rank_of(f.mask.difference(part)) != f.rank
                })
            })
            .map(|f| f.mask)
            .collect();
        let got: Vec<SubsetMask> = b.connected_flats().iter().map(|f| f.mask).collect();
        assert_eq!(got, expected, "{name}");
    }
}

#[test]
fn nested_faces_refine_bergman_faces() {
    for (name, m) in corpus() {
        let b = BergmanComplex::new(&m).unwrap();
        let mut all_tight = true;
        for s in b.nested_faces(&BuildingChoice::Minimal).unwrap() {
            let c = b.face_matroid_by_weights(&s.masks()).num_components();
            assert!(c >= s.len() + 1, "{name}");
            all_tight &= c == s.len() + 1;
        }
        assert_eq!(all_tight, b.equality_criterion(), "{name}");
    }
}

#[test]
fn tree_face_matroids_agree_with_weights() {
    for (name, m) in small_corpus() {
        let b = BergmanComplex::new(&m).unwrap();
        let minimal = b.building(&BuildingChoice::Minimal).unwrap();
        for s in b.nested_faces(&BuildingChoice::Minimal).unwrap() {
            let masks = s.masks();
            let (tree, ms) = b.nested_face_matroid(&minimal, &masks).unwrap();
            assert_eq!(ms, b.face_matroid_by_weights(&masks), "{name}");
            assert_eq!(tree.nodes.len(), s.len() + 1);
            for basis in b.adapted_bases(&masks).into_iter().take(3) {
                assert_eq!(b.face_tree_at_basis(&minimal, &masks, basis).unwrap().1, ms);
            }
        }
    }
}

#[test]
fn every_nested_facet_lies_in_exactly_one_bergman_facet() {
    for (name, m) in corpus() {
        let b = BergmanComplex::new(&m).unwrap();
        let tri = b.triangulation().unwrap();
        let nested = b.nested_facets(&BuildingChoice::Minimal).unwrap();
        assert_eq!(tri.iter().map(|t| t.simplices.len()).sum::<usize>(), nested.len(), "{name}");
        for t in &tri {
            assert!(t.simplices.iter().all(|s| s.len() == m.rank() - 1));
            for s in &t.simplices {
                // The facet's transversal matroid is the simplex's face matroid.
                let ms = b.face_matroid_by_weights(&s.masks());
                assert_eq!(ms, t.facet.transversal_matroid(m.ground_size()), "{name}");
            }
        }
    }
}

#[test]
fn minimal_and_maximal_building_sets_give_the_same_faces() {
    for (name, m) in corpus() {
        let b = BergmanComplex::new(&m).unwrap();
        let via_min = b.bergman_faces().unwrap();
        let chains = b.nested_faces(&BuildingChoice::Maximal).unwrap();
        let via_max = b.faces_from_nested(&chains).unwrap();
        assert_eq!(via_min, via_max, "{name}");
    }
}

#[test]
fn facet_partitions_are_canonical_and_distinct() {
    for (name, m) in corpus() {
        let facets = BergmanComplex::new(&m).unwrap().facets().unwrap();
        let distinct: BTreeSet<_> = facets.iter().cloned().collect();
        assert_eq!(distinct.len(), facets.len(), "{name}");
        for f in &facets {
            let mins: Vec<_> = f.blocks().iter().map(|b| b.min_element().unwrap()).collect();
            assert!(mins.windows(2).all(|p| p[0] < p[1]));
        }
    }
}

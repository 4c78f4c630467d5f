#![allow(dead_code)]

use matro_core::linalg::RationalMatrix;
use matro_core::{Matroid, SubsetMask};
use num_bigint::BigInt;
use num_rational::BigRational;

pub fn set(labels: &[usize]) -> SubsetMask {
    labels.iter().map(|l| l - 1).collect()
}

pub fn k5_edges() -> Vec<(usize, usize)> {
    (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect()
}

pub fn u24() -> Matroid {
    Matroid::uniform(2, 4).unwrap()
}

pub fn k4() -> Matroid {
    Matroid::from_graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
}

pub fn k4_minus_edge() -> Matroid {
    Matroid::from_graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
}

pub fn cube6() -> Matroid {
    Matroid::from_nonbases(6, 4, [set(&[1, 2, 3, 4]), set(&[1, 3, 5, 6]), set(&[2, 4, 5, 6])]).unwrap()
}

/// Edge sets of the 4-cycles of K5 together with their complements.
pub fn r10() -> Matroid {
    let edges = k5_edges();
    let edge = |a: usize, b: usize| edges.iter().position(|&e| e == (a.min(b), a.max(b))).unwrap();
    let mut circuits = Vec::new();
    for missing in 0..5 {
        let v: Vec<usize> = (0..5).filter(|&x| x != missing).collect();
        // The three 4-cycles on four vertices, by which vertex sits opposite v[0].
        for opposite in 1..4 {
            let others: Vec<usize> = v[1..].iter().copied().filter(|&x| x != v[opposite]).collect();
            let cycle: SubsetMask = [
                edge(v[0], others[0]),
                edge(others[0], v[opposite]),
                edge(v[opposite], others[1]),
                edge(others[1], v[0]),
            ]
            .into_iter()
            .collect();
            circuits.push(cycle);
            circuits.push(cycle.complement(10));
        }
    }
    Matroid::from_circuits(10, circuits).unwrap()
}

pub fn k5_dual() -> Matroid {
    Matroid::from_graph(5, &k5_edges()).unwrap().dual()
}

/// The vertices of the unit `d`-cube, homogenised with a leading 1.
pub fn cube_vectors(d: usize) -> Matroid {
    let columns: Vec<Vec<i64>> = (0..1usize << d)
        .map(|v| std::iter::once(1).chain((0..d).map(|k| (v >> k & 1) as i64)).collect())
        .collect();
    let rows: Vec<Vec<BigRational>> = (0..=d)
        .map(|i| columns.iter().map(|c| BigRational::from_integer(BigInt::from(c[i]))).collect())
        .collect();
    Matroid::from_vectors(&RationalMatrix::from_rows(rows).unwrap()).unwrap()
}

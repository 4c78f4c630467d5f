//! The geometric lattice of flats, its connected elements and flacets, the
//! facet description of the matroid polytope, building sets and the Möbius
//! function.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::matroid::Matroid;
use crate::subset::SubsetMask;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("matroid has loops {0}")]
    HasLoops(SubsetMask),
    #[error("matroid is not connected; components: {}", format_blocks(.0))]
    NotConnected(Vec<SubsetMask>),
    #[error("{0} is not a proper nonzero flat of the lattice")]
    NotSubsetOfLattice(SubsetMask),
    #[error("not a building set: the interval below {witness} does not factor")]
    InvalidBuildingSet { witness: SubsetMask },
}

fn format_blocks(blocks: &[SubsetMask]) -> String {
    blocks
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Lexicographic comparison of the ascending element lists.
pub fn lex_cmp(a: SubsetMask, b: SubsetMask) -> Ordering {
    a.iter().cmp(b.iter())
}

/// Canonical order on flats: by rank, then by element list.
pub fn flat_cmp(a: &Flat, b: &Flat) -> Ordering {
    a.rank.cmp(&b.rank).then_with(|| lex_cmp(a.mask, b.mask))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Flat {
    pub mask: SubsetMask,
    pub rank: usize,
}

/// All flats of a matroid with their cover relations.
#[derive(Clone, Debug)]
pub struct FlatsLattice {
    matroid: Matroid,
    /// Sorted by `flat_cmp`, so ranks are contiguous.
    flats: Vec<Flat>,
    index: HashMap<SubsetMask, usize>,
    rank_starts: Vec<usize>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
}

impl FlatsLattice {
    /// Enumerates flats level by level: every flat of rank `k + 1` is the
    /// closure of a rank-`k` flat plus one element.
    pub fn new(matroid: &Matroid) -> Self {
        let bottom = matroid.closure(SubsetMask::EMPTY);
        let mut levels: Vec<Vec<SubsetMask>> = vec![vec![bottom]];
        let mut cover_pairs: Vec<(SubsetMask, SubsetMask)> = Vec::new();
        for _ in 0..matroid.rank() {
            let mut seen = HashSet::new();
            let mut next = Vec::new();
            for &f in levels.last().unwrap() {
                let mut outside = f.complement(matroid.ground_size());
                while let Some(e) = outside.min_element() {
                    let g = matroid.closure(f.with(e));
                    outside = outside.difference(g);
                    cover_pairs.push((f, g));
                    if seen.insert(g) {
                        next.push(g);
                    }
                }
            }
            levels.push(next);
        }

        let mut flats: Vec<Flat> = levels
            .iter()
            .enumerate()
            .flat_map(|(rank, level)| level.iter().map(move |&mask| Flat { mask, rank }))
            .collect();
        flats.sort_by(flat_cmp);
        let index: HashMap<SubsetMask, usize> =
            flats.iter().enumerate().map(|(i, f)| (f.mask, i)).collect();
        let mut rank_starts = vec![0; matroid.rank() + 2];
        for f in &flats {
            rank_starts[f.rank + 1] += 1;
        }
        for k in 1..rank_starts.len() {
            rank_starts[k] += rank_starts[k - 1];
        }
        let mut up = vec![Vec::new(); flats.len()];
        let mut down = vec![Vec::new(); flats.len()];
        for (f, g) in cover_pairs {
            let (a, b) = (index[&f], index[&g]);
            up[a].push(b);
            down[b].push(a);
        }
        for list in up.iter_mut().chain(down.iter_mut()) {
            list.sort_unstable();
        }
        FlatsLattice {
            matroid: matroid.clone(),
            flats,
            index,
            rank_starts,
            up,
            down,
        }
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn flat(&self, id: usize) -> Flat {
        self.flats[id]
    }

    pub fn id_of(&self, mask: SubsetMask) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    pub fn contains(&self, mask: SubsetMask) -> bool {
        self.index.contains_key(&mask)
    }

    pub fn flats_of_rank(&self, rank: usize) -> &[Flat] {
        if rank > self.matroid.rank() {
            return &[];
        }
        &self.flats[self.rank_starts[rank]..self.rank_starts[rank + 1]]
    }

    /// Number of flats of each rank `0..=r`.
    pub fn rank_profile(&self) -> Vec<usize> {
        (0..=self.matroid.rank())
            .map(|k| self.flats_of_rank(k).len())
            .collect()
    }

    pub fn bottom(&self) -> Flat {
        self.flats[0]
    }

    pub fn top(&self) -> Flat {
        *self.flats.last().unwrap()
    }

    pub fn atoms(&self) -> &[Flat] {
        self.flats_of_rank(1)
    }

    /// Flats covering the given one.
    pub fn upper_covers(&self, id: usize) -> &[usize] {
        &self.up[id]
    }

    /// Flats covered by the given one.
    pub fn lower_covers(&self, id: usize) -> &[usize] {
        &self.down[id]
    }

    pub fn join(&self, a: SubsetMask, b: SubsetMask) -> SubsetMask {
        self.matroid.closure(a.union(b))
    }

    pub fn join_all<I: IntoIterator<Item = SubsetMask>>(&self, items: I) -> SubsetMask {
        let union = items
            .into_iter()
            .fold(SubsetMask::EMPTY, SubsetMask::union);
        self.matroid.closure(union)
    }

    /// For flats the meet is the intersection.
    pub fn meet(&self, a: SubsetMask, b: SubsetMask) -> SubsetMask {
        a.intersection(b)
    }

    /// The lower interval `[0̂, x]`, in canonical order.
    pub fn interval_below(&self, x: SubsetMask) -> Vec<SubsetMask> {
        self.flats
            .iter()
            .map(|f| f.mask)
            .filter(|m| m.is_subset(x))
            .collect()
    }

    /// `μ(0̂, 1̂)`.
    pub fn mobius(&self) -> i64 {
        let mut mu = vec![0i64; self.flats.len()];
        for i in 0..self.flats.len() {
            if i == 0 {
                mu[0] = 1;
                continue;
            }
            let x = self.flats[i].mask;
            let below: i64 = (0..i)
                .filter(|&j| self.flats[j].mask.is_subset(x))
                .map(|j| mu[j])
                .sum();
            mu[i] = -below;
        }
        *mu.last().unwrap()
    }

    fn ensure_loopless(&self) -> Result<(), LatticeError> {
        let loops = self.matroid.loops();
        if loops.is_empty() {
            Ok(())
        } else {
            Err(LatticeError::HasLoops(loops))
        }
    }

    fn ensure_connected(&self) -> Result<(), LatticeError> {
        let comps = self.matroid.connected_components();
        if comps.len() == 1 {
            Ok(())
        } else {
            Err(LatticeError::NotConnected(comps.blocks))
        }
    }

    /// Flats of positive rank whose restriction is connected: the minimal
    /// building set. The top is included iff the matroid is connected.
    pub fn connected_flats(&self) -> Result<BuildingSet, LatticeError> {
        self.ensure_loopless()?;
        let members = self
            .flats
            .iter()
            .filter(|f| f.rank > 0)
            .filter(|f| {
                self.matroid
                    .restriction(f.mask)
                    .expect("lattice element is a flat")
                    .matroid
                    .is_connected()
            })
            .copied()
            .collect();
        Ok(BuildingSet::from_sorted(self, members))
    }

    /// Flats whose restriction and contraction are both connected; these
    /// index the facets of the matroid polytope.
    pub fn flacets(&self) -> Result<Vec<Flat>, LatticeError> {
        self.ensure_connected()?;
        Ok(self
            .flats
            .iter()
            .filter(|f| {
                let res = self.matroid.restriction(f.mask).expect("flat");
                let con = self.matroid.contraction(f.mask).expect("flat");
                res.matroid.is_connected() && con.matroid.is_connected()
            })
            .copied()
            .collect())
    }

    /// Irredundant inequality description of the matroid polytope.
    pub fn polytope_facets(&self) -> Result<PolytopeFacets, LatticeError> {
        let flacets = self.flacets()?;
        Ok(PolytopeFacets {
            n: self.matroid.ground_size(),
            rank: self.matroid.rank(),
            dimension: polytope_dimension(&self.matroid),
            inequalities: flacets.into_iter().map(|f| (f, f.rank)).collect(),
        })
    }

    /// Returns `None` when `members` is a building set, otherwise the first
    /// flat `X` (in canonical order) whose lower interval fails to be the
    /// product of the intervals below the maximal members under `X`.
    pub fn building_set_witness(
        &self,
        members: &[SubsetMask],
    ) -> Result<Option<SubsetMask>, LatticeError> {
        let bottom = self.bottom().mask;
        for &g in members {
            if g == bottom || !self.contains(g) {
                return Err(LatticeError::NotSubsetOfLattice(g));
            }
        }
        for x in self.flats.iter().skip(1) {
            if !self.interval_factors(x, members) {
                return Ok(Some(x.mask));
            }
        }
        Ok(None)
    }

    pub fn is_building_set(&self, members: &[SubsetMask]) -> Result<bool, LatticeError> {
        Ok(self.building_set_witness(members)?.is_none())
    }

    /// Checks that joining tuples from `[0̂, G_j]` is a poset isomorphism onto
    /// `[0̂, X]`, with inverse `Z ↦ (Z ∧ G_j)_j`.
    fn interval_factors(&self, x: &Flat, members: &[SubsetMask]) -> bool {
        let below: Vec<SubsetMask> = members
            .iter()
            .copied()
            .filter(|g| g.is_subset(x.mask))
            .collect();
        let maximal: Vec<SubsetMask> = below
            .iter()
            .copied()
            .filter(|&g| !below.iter().any(|&h| h != g && g.is_subset(h)))
            .collect();
        let rank_sum: usize = maximal.iter().map(|&g| self.matroid.rank_of(g)).sum();
        if rank_sum != x.rank {
            return false;
        }
        let target = self.interval_below(x.mask);
        let factors: Vec<Vec<SubsetMask>> =
            maximal.iter().map(|&g| self.interval_below(g)).collect();
        let product_size: usize = factors.iter().map(Vec::len).product();
        if product_size != target.len() {
            return false;
        }
        // Forward: every tuple joins into X's interval and projects back.
        let mut images = HashSet::new();
        let mut counters = vec![0usize; factors.len()];
        loop {
            let tuple: Vec<SubsetMask> = counters
                .iter()
                .zip(&factors)
                .map(|(&k, f)| f[k])
                .collect();
            let z = self.join_all(tuple.iter().copied());
            if !z.is_subset(x.mask) {
                return false;
            }
            for (y, &g) in tuple.iter().zip(&maximal) {
                if self.meet(z, g) != *y {
                    return false;
                }
            }
            images.insert(z);
            // Odometer increment.
            let mut k = 0;
            while k < counters.len() {
                counters[k] += 1;
                if counters[k] < factors[k].len() {
                    break;
                }
                counters[k] = 0;
                k += 1;
            }
            if k == counters.len() {
                break;
            }
        }
        images.len() == target.len()
    }
}

/// `dim P_M = n - c(M)`.
pub fn polytope_dimension(matroid: &Matroid) -> usize {
    matroid.ground_size() - matroid.num_components()
}

/// `P_M = { x ≥ 0 : Σ x_i = r, Σ_{i∈F} x_i ≤ rank(F) for every flacet F }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeFacets {
    pub n: usize,
    pub rank: usize,
    pub dimension: usize,
    /// `(F, rank F)` for each flacet, in canonical flat order.
    pub inequalities: Vec<(Flat, usize)>,
}

/// A set of flats satisfying the building-set condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildingSet {
    members: Vec<Flat>,
    contains_top: bool,
}

impl BuildingSet {
    fn from_sorted(lattice: &FlatsLattice, mut members: Vec<Flat>) -> Self {
        members.sort_by(flat_cmp);
        let top = lattice.top().mask;
        let contains_top = members.iter().any(|f| f.mask == top);
        BuildingSet {
            members,
            contains_top,
        }
    }

    /// Validates an arbitrary family of flats.
    pub fn new(lattice: &FlatsLattice, masks: &[SubsetMask]) -> Result<Self, LatticeError> {
        if let Some(witness) = lattice.building_set_witness(masks)? {
            return Err(LatticeError::InvalidBuildingSet { witness });
        }
        let mut seen = HashSet::new();
        let members = masks
            .iter()
            .filter(|m| seen.insert(**m))
            .map(|&m| lattice.flat(lattice.id_of(m).expect("checked")))
            .collect();
        Ok(Self::from_sorted(lattice, members))
    }

    /// Every flat except the bottom.
    pub fn maximal(lattice: &FlatsLattice) -> Self {
        Self::from_sorted(lattice, lattice.flats()[1..].to_vec())
    }

    pub fn members(&self) -> &[Flat] {
        &self.members
    }

    pub fn masks(&self) -> Vec<SubsetMask> {
        self.members.iter().map(|f| f.mask).collect()
    }

    pub fn contains_top(&self) -> bool {
        self.contains_top
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(labels: &[usize]) -> SubsetMask {
        labels.iter().map(|&l| l - 1).collect()
    }

    fn k4() -> Matroid {
        Matroid::from_graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn cube6() -> Matroid {
        let nb = [set(&[1, 2, 3, 4]), set(&[1, 3, 5, 6]), set(&[2, 4, 5, 6])];
        Matroid::from_nonbases(6, 4, nb).unwrap()
    }

    #[test]
    fn uniform_lattice() {
        let l = FlatsLattice::new(&Matroid::uniform(2, 4).unwrap());
        assert_eq!(l.rank_profile(), vec![1, 4, 1]);
        assert_eq!(l.mobius(), 3);
        let g = l.connected_flats().unwrap();
        assert_eq!(g.len(), 5);
        assert!(g.contains_top());
    }

    #[test]
    fn k4_lattice() {
        let l = FlatsLattice::new(&k4());
        assert_eq!(l.rank_profile(), vec![1, 6, 7, 1]);
        let lines = l.flats_of_rank(2);
        assert_eq!(lines.iter().filter(|f| f.mask.len() == 3).count(), 4);
        assert_eq!(lines.iter().filter(|f| f.mask.len() == 2).count(), 3);
        let g = l.connected_flats().unwrap();
        assert_eq!(g.len(), 6 + 4 + 1);
        assert!(g
            .members()
            .iter()
            .all(|f| f.rank != 2 || f.mask.len() == 3));
        assert_eq!(l.flacets().unwrap().len(), 10);
    }

    #[test]
    fn boolean_lattice_mobius() {
        for r in 1..=5 {
            let l = FlatsLattice::new(&Matroid::free(r).unwrap());
            assert_eq!(l.mobius(), if r % 2 == 0 { 1 } else { -1 });
            assert_eq!(l.len(), 1 << r);
        }
    }

    #[test]
    fn cube_flacets_and_facets() {
        let m = cube6();
        let l = FlatsLattice::new(&m);
        let flacets: Vec<SubsetMask> = l.flacets().unwrap().iter().map(|f| f.mask).collect();
        let mut expected: Vec<SubsetMask> = (0..6).map(SubsetMask::singleton).collect();
        expected.extend([set(&[1, 2, 3, 4]), set(&[1, 3, 5, 6]), set(&[2, 4, 5, 6])]);
        assert_eq!(flacets, expected);
        let p = l.polytope_facets().unwrap();
        assert_eq!(p.inequalities.len(), 9);
        assert_eq!(p.dimension, 5);
        assert!(p
            .inequalities
            .iter()
            .all(|(f, rhs)| *rhs == if f.mask.len() == 1 { 1 } else { 3 }));
    }

    #[test]
    fn octahedron_facets() {
        let l = FlatsLattice::new(&Matroid::uniform(2, 4).unwrap());
        let p = l.polytope_facets().unwrap();
        assert_eq!(p.dimension, 3);
        assert_eq!(p.inequalities.len(), 4);
        assert!(p.inequalities.iter().all(|(f, rhs)| f.mask.len() == 1 && *rhs == 1));
    }

    #[test]
    fn single_element_polytope_is_point() {
        let l = FlatsLattice::new(&Matroid::free(1).unwrap());
        let p = l.polytope_facets().unwrap();
        assert_eq!(p.dimension, 0);
        assert!(p.inequalities.is_empty());
    }

    #[test]
    fn disconnected_has_no_flacets() {
        let u12 = Matroid::uniform(1, 2).unwrap();
        let l = FlatsLattice::new(&u12.direct_sum(&u12).unwrap());
        assert!(matches!(l.flacets(), Err(LatticeError::NotConnected(b)) if b.len() == 2));
    }

    #[test]
    fn k4_minus_edge_connected_flat_that_is_not_a_flacet() {
        // Edges 12,13,14,23,24; the missing edge is 34, its complement is 12.
        let m = Matroid::from_graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let l = FlatsLattice::new(&m);
        let e12 = set(&[1]);
        assert!(l.connected_flats().unwrap().masks().contains(&e12));
        assert!(!l.flacets().unwrap().iter().any(|f| f.mask == e12));
    }

    #[test]
    fn building_set_checks() {
        let l = FlatsLattice::new(&k4());
        let gmin = l.connected_flats().unwrap().masks();
        assert!(l.is_building_set(&gmin).unwrap());
        assert!(l.is_building_set(&BuildingSet::maximal(&l).masks()).unwrap());
        let line = *gmin.iter().find(|g| g.len() == 3).unwrap();
        let without: Vec<SubsetMask> = gmin.iter().copied().filter(|&g| g != line).collect();
        assert_eq!(l.building_set_witness(&without).unwrap(), Some(line));
        assert!(matches!(
            BuildingSet::new(&l, &without),
            Err(LatticeError::InvalidBuildingSet { witness }) if witness == line
        ));
        assert_eq!(
            l.building_set_witness(&[SubsetMask::EMPTY]),
            Err(LatticeError::NotSubsetOfLattice(SubsetMask::EMPTY))
        );
        assert_eq!(
            l.building_set_witness(&[set(&[1, 2])]),
            Err(LatticeError::NotSubsetOfLattice(set(&[1, 2])))
        );
    }

    #[test]
    fn loops_rejected() {
        let m = Matroid::from_circuits(3, [set(&[1]), set(&[2, 3])]).unwrap();
        let l = FlatsLattice::new(&m);
        assert_eq!(l.connected_flats(), Err(LatticeError::HasLoops(set(&[1]))));
    }

    #[test]
    fn lex_order() {
        assert_eq!(lex_cmp(set(&[1]), set(&[1, 2])), Ordering::Less);
        assert_eq!(lex_cmp(set(&[1, 3]), set(&[2])), Ordering::Less);
        assert_eq!(lex_cmp(set(&[2, 3]), set(&[2, 3])), Ordering::Equal);
    }
}

//! Bergman complexes and their nested set triangulations.
//!
//! A Bergman facet is encoded as a partition of the ground set into `r`
//! blocks; the face matroid of the facet is the direct sum of the rank-one
//! matroids on the blocks. Nested sets exclude the top flat, which acts as
//! the apex of the cone.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use thiserror::Error;

use crate::boolean::{is_nested_by, BooleanFamily};
use crate::lattice::{flat_cmp, lex_cmp, BuildingSet, Flat, FlatsLattice, LatticeError};
use crate::matroid::{Matroid, MatroidError};
use crate::subset::SubsetMask;
use crate::weights::WeightVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BergmanError {
    #[error("matroid has loops {0}")]
    HasLoops(SubsetMask),
    #[error("matroid is not connected; components: {}", format_blocks(.0))]
    NotConnected(Vec<SubsetMask>),
    #[error("{0} is not a basis")]
    NotABasis(SubsetMask),
    #[error("partition {0} is not a facet of the Bergman complex")]
    NotAFacet(SetPartition),
    #[error("family {} is not nested", format_blocks(.0))]
    NotNested(Vec<SubsetMask>),
    #[error("not a building set: the interval below {witness} does not factor")]
    InvalidBuildingSet { witness: SubsetMask },
    #[error("{0} is not a flat of the matroid")]
    NotAFlat(SubsetMask),
    #[error("weight vector has {got} entries, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

fn format_blocks(blocks: &[SubsetMask]) -> String {
    blocks.iter().map(ToString::to_string).join(" ")
}

impl From<LatticeError> for BergmanError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::HasLoops(l) => BergmanError::HasLoops(l),
            LatticeError::NotConnected(b) => BergmanError::NotConnected(b),
            LatticeError::NotSubsetOfLattice(s) => BergmanError::NotAFlat(s),
            LatticeError::InvalidBuildingSet { witness } => {
                BergmanError::InvalidBuildingSet { witness }
            }
        }
    }
}

/// An unordered partition of the ground set; blocks sorted by minimum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetPartition {
    blocks: Vec<SubsetMask>,
}

impl SetPartition {
    pub fn new(mut blocks: Vec<SubsetMask>) -> Self {
        blocks.sort_unstable_by_key(|b| b.min_element());
        SetPartition { blocks }
    }

    pub fn blocks(&self) -> &[SubsetMask] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Nonempty pairwise disjoint blocks covering exactly `{0, .., n-1}`.
    pub fn is_partition_of(&self, n: usize) -> bool {
        let mut seen = SubsetMask::EMPTY;
        for &b in &self.blocks {
            if b.is_empty() || !b.is_disjoint(seen) {
                return false;
            }
            seen = seen.union(b);
        }
        seen == SubsetMask::full(n)
    }

    /// Index of the block containing `e`.
    pub fn block_of(&self, e: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(e))
    }

    /// The direct sum of the rank-one matroids on the blocks: its bases are
    /// the transversals.
    pub fn transversal_matroid(&self, n: usize) -> Matroid {
        let bases = self
            .blocks
            .iter()
            .map(|b| b.iter().collect::<Vec<_>>())
            .multi_cartesian_product()
            .map(SubsetMask::from_elements);
        Matroid::from_bases_trusted(n, self.blocks.len(), bases).expect("transversals")
    }
}

impl Ord for SetPartition {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut pairs = self.blocks.iter().zip(&other.blocks);
        pairs
            .find_map(|(&a, &b)| Some(lex_cmp(a, b)).filter(|o| o.is_ne()))
            .unwrap_or_else(|| self.blocks.len().cmp(&other.blocks.len()))
    }
}

impl PartialOrd for SetPartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_blocks(&self.blocks))
    }
}

/// A simplex of a nested set complex: flats below the top, canonically
/// sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NestedSet {
    members: Vec<Flat>,
}

impl NestedSet {
    pub fn new(mut members: Vec<Flat>) -> Self {
        members.sort_by(flat_cmp);
        members.dedup();
        NestedSet { members }
    }

    pub fn members(&self) -> &[Flat] {
        &self.members
    }

    pub fn masks(&self) -> Vec<SubsetMask> {
        self.members.iter().map(|f| f.mask).collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// All nonempty subsets, i.e. the faces of this simplex.
    pub fn faces(&self) -> impl Iterator<Item = NestedSet> + '_ {
        (1u32..1 << self.members.len()).map(move |bits| NestedSet {
            members: self
                .members
                .iter()
                .enumerate()
                .filter(|(k, _)| bits >> k & 1 == 1)
                .map(|(_, &f)| f)
                .collect(),
        })
    }
}

impl Ord for NestedSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.members
            .len()
            .cmp(&other.members.len())
            .then_with(|| {
                self.members
                    .iter()
                    .zip(&other.members)
                    .map(|(a, b)| flat_cmp(a, b))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            })
    }
}

impl PartialOrd for NestedSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A face of the Bergman complex, identified by its loop-free face matroid.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BergmanFace {
    pub matroid: Matroid,
    /// Spherical dimension `c(M_Γ) - 2`.
    pub dim: usize,
}

/// Face counts by dimension, starting at vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FVector(pub Vec<usize>);

impl FVector {
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Reduced Euler characteristic `-1 + Σ_d (-1)^d f_d`.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        euler_characteristic(self)
    }
}

impl fmt::Display for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(", "))
    }
}

pub fn euler_characteristic(fv: &FVector) -> i64 {
    fv.0.iter()
        .enumerate()
        .map(|(d, &f)| if d % 2 == 0 { f as i64 } else { -(f as i64) })
        .sum::<i64>()
        - 1
}

/// Whether `w` lies in the Bergman fan: the minimum of `w` over every
/// circuit is attained at least twice.
pub fn bergman_membership(matroid: &Matroid, w: &WeightVector) -> Result<bool, BergmanError> {
    let loops = matroid.loops();
    if !loops.is_empty() {
        return Err(BergmanError::HasLoops(loops));
    }
    if w.len() != matroid.ground_size() {
        return Err(BergmanError::LengthMismatch {
            expected: matroid.ground_size(),
            got: w.len(),
        });
    }
    let w = w.as_slice();
    Ok(matroid.circuits().into_iter().all(|c| {
        let min = c.iter().map(|e| &w[e]).min().expect("circuits are nonempty");
        c.iter().filter(|&e| &w[e] == min).count() >= 2
    }))
}

/// For each `i ∉ σ`, the set `F_i ⊆ σ` with `F_i ∪ {i}` a circuit.
pub fn local_building_set(
    matroid: &Matroid,
    basis: SubsetMask,
) -> Result<Vec<(usize, SubsetMask)>, BergmanError> {
    if !matroid.is_basis(basis) {
        return Err(BergmanError::NotABasis(basis));
    }
    Ok(basis
        .complement(matroid.ground_size())
        .iter()
        .map(|i| (i, matroid.fundamental_circuit(basis, i).without(i)))
        .collect())
}

/// Which building set a nested set complex is taken over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuildingChoice {
    /// The connected flats.
    Minimal,
    /// All flats above the bottom; the complex is the order complex.
    Maximal,
    /// A user-supplied family of flats, validated first.
    Custom(Vec<SubsetMask>),
}

/// A validated building set with the top adjoined, ready for nestedness
/// queries.
#[derive(Clone, Debug)]
pub struct Building {
    choice: BuildingChoice,
    /// Members other than the top, canonical order.
    vertices: Vec<Flat>,
    members: HashSet<SubsetMask>,
}

impl Building {
    pub fn choice(&self) -> &BuildingChoice {
        &self.choice
    }

    /// The vertices of the nested set complex.
    pub fn vertices(&self) -> &[Flat] {
        &self.vertices
    }

    pub fn contains(&self, flat: SubsetMask) -> bool {
        self.members.contains(&flat)
    }
}

/// One Bergman facet together with the nested simplices covering it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetTriangulation {
    pub facet: SetPartition,
    /// Connected flats below the top that are unions of rank-many blocks.
    pub pool: Vec<Flat>,
    /// Maximal nested subsets of the pool.
    pub simplices: Vec<NestedSet>,
}

impl FacetTriangulation {
    pub fn is_subdivided(&self) -> bool {
        self.simplices.len() > 1
    }
}

/// A node of the face tree: the interval `[lower, upper]` of the lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalNode {
    pub lower: SubsetMask,
    pub upper: SubsetMask,
    pub children: Vec<usize>,
}

/// The labeled tree of a nested set; node 0 is the root (the top flat).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceTree {
    pub nodes: Vec<IntervalNode>,
}

impl FaceTree {
    /// `upper ∖ lower` for every node, as a partition of the ground set.
    pub fn partition(&self) -> SetPartition {
        SetPartition::new(self.nodes.iter().map(|v| v.upper.difference(v.lower)).collect())
    }
}

/// The Bergman complex of a connected loop-free matroid, with its lattice
/// of flats and connected flats precomputed.
#[derive(Clone, Debug)]
pub struct BergmanComplex {
    matroid: Matroid,
    lattice: FlatsLattice,
    minimal: Building,
    threads: Option<usize>,
}

impl BergmanComplex {
    pub fn new(matroid: &Matroid) -> Result<Self, BergmanError> {
        let loops = matroid.loops();
        if !loops.is_empty() {
            return Err(BergmanError::HasLoops(loops));
        }
        let comps = matroid.connected_components();
        if comps.len() != 1 {
            return Err(BergmanError::NotConnected(comps.blocks));
        }
        let lattice = FlatsLattice::new(matroid);
        let connected = lattice.connected_flats()?;
        let minimal = Self::building_from(&lattice, BuildingChoice::Minimal, &connected);
        Ok(BergmanComplex {
            matroid: matroid.clone(),
            lattice,
            minimal,
            threads: None,
        })
    }

    /// Caps the worker threads used by the basis loop.
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads.max(1));
        self
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn lattice(&self) -> &FlatsLattice {
        &self.lattice
    }

    /// Connected flats below the top.
    pub fn connected_flats(&self) -> &[Flat] {
        &self.minimal.vertices
    }

    fn rank(&self) -> usize {
        self.matroid.rank()
    }

    fn top(&self) -> SubsetMask {
        self.matroid.ground_set()
    }

    fn flat(&self, mask: SubsetMask) -> Flat {
        self.lattice.flat(self.lattice.id_of(mask).expect("lattice flat"))
    }

    fn building_from(lattice: &FlatsLattice, choice: BuildingChoice, set: &BuildingSet) -> Building {
        let top = lattice.top().mask;
        let vertices: Vec<Flat> = set
            .members()
            .iter()
            .copied()
            .filter(|f| f.mask != top)
            .collect();
        let mut members: HashSet<SubsetMask> = vertices.iter().map(|f| f.mask).collect();
        members.insert(top);
        Building {
            choice,
            vertices,
            members,
        }
    }

    /// Resolves a building-set choice; custom families are validated.
    pub fn building(&self, choice: &BuildingChoice) -> Result<Building, BergmanError> {
        Ok(match choice {
            BuildingChoice::Minimal => self.minimal.clone(),
            BuildingChoice::Maximal => {
                let set = BuildingSet::maximal(&self.lattice);
                Self::building_from(&self.lattice, choice.clone(), &set)
            }
            BuildingChoice::Custom(masks) => {
                let set = BuildingSet::new(&self.lattice, masks)?;
                Self::building_from(&self.lattice, choice.clone(), &set)
            }
        })
    }

    fn install<R: Send>(&self, job: impl FnOnce() -> R + Send) -> Result<R, BergmanError> {
        match self.threads {
            None => Ok(job()),
            Some(t) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build()
                    .map_err(|e| BergmanError::ThreadPool(e.to_string()))?;
                Ok(pool.install(job))
            }
        }
    }

    /// The partitions produced at one basis: for every ordering of the basis
    /// elements, each basis element collects the outside elements whose
    /// local set `F_i` it precedes all other members of.
    fn facets_at_basis(&self, basis: SubsetMask) -> HashSet<SetPartition> {
        let local = local_building_set(&self.matroid, basis).expect("basis");
        let sigma: Vec<usize> = basis.iter().collect();
        let mut position = vec![usize::MAX; self.matroid.ground_size()];
        let mut out = HashSet::new();
        for order in (0..sigma.len()).permutations(sigma.len()) {
            for (k, &j) in order.iter().enumerate() {
                position[sigma[j]] = k;
            }
            let mut blocks: Vec<SubsetMask> =
                sigma.iter().map(|&s| SubsetMask::singleton(s)).collect();
            for &(i, f) in &local {
                let first = f.iter().min_by_key(|&e| position[e]).expect("loop-free");
                let slot = sigma.binary_search(&first).expect("F_i lies in the basis");
                blocks[slot] = blocks[slot].with(i);
            }
            out.insert(SetPartition::new(blocks));
        }
        out
    }

    /// The facets of the Bergman complex as set partitions, sorted.
    pub fn facets(&self) -> Result<Vec<SetPartition>, BergmanError> {
        let bases = self.matroid.bases();
        let merged = self.install(|| {
            bases
                .par_iter()
                .map(|&b| self.facets_at_basis(b))
                .reduce(HashSet::new, |mut a, b| {
                    if a.len() < b.len() {
                        return b.into_iter().chain(a).collect();
                    }
                    a.extend(b);
                    a
                })
        })?;
        let mut out: Vec<SetPartition> = merged.into_iter().collect();
        out.sort();
        Ok(out)
    }

    /// Decides whether a partition is a Bergman facet: take the transversal
    /// of block minima; it must be a basis, and the outside elements must be
    /// assignable to their blocks by some ordering of the basis, i.e. the
    /// precedence constraints must be acyclic.
    pub fn is_facet(&self, omega: &SetPartition) -> bool {
        let n = self.matroid.ground_size();
        if omega.len() != self.rank() || !omega.is_partition_of(n) {
            return false;
        }
        let reps: Vec<usize> = omega
            .blocks()
            .iter()
            .map(|b| b.min_element().expect("nonempty"))
            .collect();
        let basis = SubsetMask::from_elements(reps.iter().copied());
        if !self.matroid.is_basis(basis) {
            return false;
        }
        // Edge a -> b: a must come before b.
        let mut successors: HashMap<usize, SubsetMask> = HashMap::new();
        for (i, f) in local_building_set(&self.matroid, basis).expect("basis") {
            let rep = reps[omega.block_of(i).expect("partition")];
            if !f.contains(rep) {
                return false;
            }
            let entry = successors.entry(rep).or_default();
            *entry = entry.union(f.without(rep));
        }
        // Kahn's algorithm on the basis elements.
        let mut indegree: HashMap<usize, usize> = reps.iter().map(|&v| (v, 0)).collect();
        for targets in successors.values() {
            for t in targets.iter() {
                *indegree.get_mut(&t).expect("target in basis") += 1;
            }
        }
        let mut ready: Vec<usize> = indegree
            .iter()
            .filter(|(_, &d)| d == 0)
            .map(|(&v, _)| v)
            .collect();
        let mut visited = 0;
        while let Some(v) = ready.pop() {
            visited += 1;
            for t in successors.get(&v).copied().unwrap_or_default().iter() {
                let d = indegree.get_mut(&t).expect("target in basis");
                *d -= 1;
                if *d == 0 {
                    ready.push(t);
                }
            }
        }
        visited == reps.len()
    }

    /// The nested simplices of the minimal nested set complex that tile one
    /// Bergman facet.
    pub fn facet_triangulation(
        &self,
        omega: &SetPartition,
    ) -> Result<FacetTriangulation, BergmanError> {
        if !self.is_facet(omega) {
            return Err(BergmanError::NotAFacet(omega.clone()));
        }
        let pool: Vec<Flat> = self
            .minimal
            .vertices
            .iter()
            .copied()
            .filter(|f| {
                let inside = omega.blocks().iter().filter(|b| b.is_subset(f.mask));
                let covered = inside.clone().fold(SubsetMask::EMPTY, |a, &b| a.union(b));
                covered == f.mask && inside.count() == f.rank
            })
            .collect();
        let simplices = if pool.len() == self.rank() - 1 {
            vec![NestedSet::new(pool.clone())]
        } else {
            self.maximal_nested_subsets(&pool, &self.minimal)
        };
        Ok(FacetTriangulation {
            facet: omega.clone(),
            pool,
            simplices,
        })
    }

    /// Triangulations of every Bergman facet, in facet order.
    pub fn triangulation(&self) -> Result<Vec<FacetTriangulation>, BergmanError> {
        let facets = self.facets()?;
        self.install(|| {
            facets
                .par_iter()
                .map(|omega| self.facet_triangulation(omega))
                .collect::<Result<Vec<_>, _>>()
        })?
    }

    /// Nestedness of a family of flats below the top with respect to a
    /// building set: no antichain of two or more has its join in the set.
    pub fn is_nested(&self, building: &Building, family: &[SubsetMask]) -> bool {
        let top = self.top();
        family
            .iter()
            .all(|&f| f != top && building.contains(f))
            && is_nested_by(family, |union| {
                building.contains(self.matroid.closure(union))
            })
    }

    /// All nested subsets of `pool`, by depth-first extension in pool order.
    fn nested_faces_within(&self, pool: &[Flat], building: &Building) -> Vec<NestedSet> {
        let mut cache: HashMap<SubsetMask, SubsetMask> = HashMap::new();
        let mut join_in = |union: SubsetMask| {
            let closed = *cache
                .entry(union)
                .or_insert_with(|| self.matroid.closure(union));
            building.contains(closed)
        };
        let mut out = Vec::new();
        let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
        while let Some((chosen, start)) = stack.pop() {
            for k in start..pool.len() {
                let mut next = chosen.clone();
                next.push(k);
                let masks: Vec<SubsetMask> = next.iter().map(|&i| pool[i].mask).collect();
                // Only antichains containing the new member need checking.
                let fresh = pool[k].mask;
                let others: Vec<SubsetMask> = masks[..masks.len() - 1]
                    .iter()
                    .copied()
                    .filter(|m| !m.is_subset(fresh) && !fresh.is_subset(*m))
                    .collect();
                let ok = (0u32..1 << others.len()).all(|bits| {
                    let picked: Vec<SubsetMask> = others
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| bits >> j & 1 == 1)
                        .map(|(_, &m)| m)
                        .collect();
                    if picked.is_empty()
                        || picked
                            .iter()
                            .tuple_combinations()
                            .any(|(a, b)| a.is_subset(*b) || b.is_subset(*a))
                    {
                        return true;
                    }
                    let union = picked.iter().fold(fresh, |a, &m| a.union(m));
                    !join_in(union)
                });
                if ok {
                    out.push(NestedSet::new(next.iter().map(|&i| pool[i]).collect()));
                    stack.push((next, k + 1));
                }
            }
        }
        out
    }

    fn maximal_nested_subsets(&self, pool: &[Flat], building: &Building) -> Vec<NestedSet> {
        let faces = self.nested_faces_within(pool, building);
        maximal_only(faces)
    }

    /// Facets of the nested set complex for the chosen building set.
    pub fn nested_facets(&self, choice: &BuildingChoice) -> Result<Vec<NestedSet>, BergmanError> {
        let mut out: Vec<NestedSet> = match choice {
            BuildingChoice::Minimal => self
                .triangulation()?
                .into_iter()
                .flat_map(|t| t.simplices)
                .collect(),
            BuildingChoice::Maximal => self.maximal_chains(),
            BuildingChoice::Custom(_) => {
                let building = self.building(choice)?;
                self.maximal_nested_subsets(&building.vertices, &building)
            }
        };
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Maximal chains of the proper part of the lattice.
    fn maximal_chains(&self) -> Vec<NestedSet> {
        let top_id = self.lattice.len() - 1;
        let mut out = Vec::new();
        let mut stack: Vec<Vec<usize>> = self
            .lattice
            .upper_covers(0)
            .iter()
            .filter(|&&a| a != top_id)
            .map(|&a| vec![a])
            .collect();
        while let Some(chain) = stack.pop() {
            let last = *chain.last().unwrap();
            let ups: Vec<usize> = self
                .lattice
                .upper_covers(last)
                .iter()
                .copied()
                .filter(|&u| u != top_id)
                .collect();
            if ups.is_empty() {
                out.push(NestedSet::new(chain.iter().map(|&i| self.lattice.flat(i)).collect()));
            }
            for u in ups {
                let mut next = chain.clone();
                next.push(u);
                stack.push(next);
            }
        }
        out
    }

    /// Every simplex of the nested set complex (nonempty nested sets).
    pub fn nested_faces(&self, choice: &BuildingChoice) -> Result<Vec<NestedSet>, BergmanError> {
        let facets = self.nested_facets(choice)?;
        let mut faces: HashSet<NestedSet> = HashSet::new();
        for f in &facets {
            faces.extend(f.faces());
        }
        let mut out: Vec<NestedSet> = faces.into_iter().collect();
        out.sort();
        Ok(out)
    }

    pub fn nested_f_vector(&self, choice: &BuildingChoice) -> Result<FVector, BergmanError> {
        Ok(f_vector_of(
            self.nested_faces(choice)?.iter().map(|s| s.len() - 1),
            self.rank() - 1,
        ))
    }

    /// `M_S` through the weight vector `Σ_{G∈S} 1_G`, which lies in the
    /// relative interior of the cone spanned by the simplex.
    pub fn face_matroid_by_weights(&self, nested: &[SubsetMask]) -> Matroid {
        let mut w = vec![0i64; self.matroid.ground_size()];
        for g in nested {
            for e in g.iter() {
                w[e] += 1;
            }
        }
        self.matroid.max_weight_integer(&w).expect("length matches")
    }

    /// Bases `σ` for which every member of the nested set is spanned by its
    /// intersection with `σ`.
    pub fn adapted_bases(&self, nested: &[SubsetMask]) -> Vec<SubsetMask> {
        let ranks: Vec<usize> = nested.iter().map(|&g| self.matroid.rank_of(g)).collect();
        self.matroid
            .bases()
            .iter()
            .copied()
            .filter(|b| {
                nested
                    .iter()
                    .zip(&ranks)
                    .all(|(g, &r)| b.intersection(*g).len() == r)
            })
            .collect()
    }

    /// The interval-labeled tree of a nested set built over a given adapted
    /// basis, and the direct sum of its interval matroids.
    pub fn face_tree_at_basis(
        &self,
        building: &Building,
        nested: &[SubsetMask],
        basis: SubsetMask,
    ) -> Result<(FaceTree, Matroid), BergmanError> {
        if !self.is_nested(building, nested) {
            return Err(BergmanError::NotNested(nested.to_vec()));
        }
        let sigma: Vec<usize> = basis.iter().collect();
        let to_local = |set: SubsetMask| -> SubsetMask {
            sigma
                .iter()
                .enumerate()
                .filter(|(_, &e)| set.contains(e))
                .map(|(k, _)| k)
                .collect()
        };
        let to_global = |local: SubsetMask| -> SubsetMask {
            local.iter().map(|k| sigma[k]).collect()
        };
        // The local building set: members spanned by subsets of the basis.
        let local_family = BooleanFamily::new(
            sigma.len(),
            building
                .members
                .iter()
                .filter(|&&g| basis.intersection(g).len() == self.matroid.rank_of(g))
                .map(|&g| to_local(basis.intersection(g))),
        )
        .expect("nonempty local sets");
        let mut local_nested: Vec<SubsetMask> = nested
            .iter()
            .map(|&g| to_local(basis.intersection(g)))
            .collect();
        local_nested.push(SubsetMask::full(sigma.len()));
        let tree = local_family
            .tree_from_nested(&local_nested)
            .map_err(|_| BergmanError::NotNested(nested.to_vec()))?;
        let nodes: Vec<IntervalNode> = (0..tree.len())
            .map(|id| IntervalNode {
                lower: self.matroid.closure(to_global(tree.below(id))),
                upper: self.matroid.closure(to_global(tree.at_or_below(id))),
                children: tree.nodes()[id].children.clone(),
            })
            .collect();
        let parts = nodes
            .iter()
            .map(|v| {
                self.matroid
                    .interval_matroid(v.lower, v.upper)
                    .map(|m| (m.matroid, m.labels))
            })
            .collect::<Result<Vec<_>, MatroidError>>()
            .expect("tree intervals are flats");
        let sum = Matroid::direct_sum_on(self.matroid.ground_size(), &parts)
            .expect("parts partition the ground set");
        Ok((FaceTree { nodes }, sum))
    }

    /// The face tree and face matroid `M_S` of a nested set: the direct sum
    /// of the interval matroids `M[F_<ν, F_≤ν]` over the nodes.
    pub fn nested_face_matroid(
        &self,
        building: &Building,
        nested: &[SubsetMask],
    ) -> Result<(FaceTree, Matroid), BergmanError> {
        if !self.is_nested(building, nested) {
            return Err(BergmanError::NotNested(nested.to_vec()));
        }
        let basis = *self
            .adapted_bases(nested)
            .first()
            .ok_or_else(|| BergmanError::NotNested(nested.to_vec()))?;
        self.face_tree_at_basis(building, nested, basis)
    }

    /// The block partition of a nested facet.
    pub fn facet_partition(&self, facet: &NestedSet) -> Result<SetPartition, BergmanError> {
        let building = self.minimal_or_order(facet)?;
        Ok(self.nested_face_matroid(&building, &facet.masks())?.0.partition())
    }

    fn minimal_or_order(&self, s: &NestedSet) -> Result<Building, BergmanError> {
        if self.is_nested(&self.minimal, &s.masks()) {
            Ok(self.minimal.clone())
        } else {
            self.building(&BuildingChoice::Maximal)
        }
    }

    /// All faces of the Bergman complex, each given by its face matroid,
    /// sorted by dimension and then by bases.
    pub fn bergman_faces(&self) -> Result<Vec<BergmanFace>, BergmanError> {
        let faces = self.nested_faces(&BuildingChoice::Minimal)?;
        self.faces_from_nested(&faces)
    }

    /// Face matroids of the given nested simplices, deduplicated.
    pub fn faces_from_nested(&self, faces: &[NestedSet]) -> Result<Vec<BergmanFace>, BergmanError> {
        let distinct: HashSet<Matroid> = self.install(|| {
            faces
                .par_iter()
                .map(|s| self.face_matroid_by_weights(&s.masks()))
                .collect()
        })?;
        let mut out: Vec<BergmanFace> = distinct
            .into_iter()
            .map(|m| {
                let c = m.num_components();
                BergmanFace { matroid: m, dim: c - 2 }
            })
            .collect();
        out.sort_by(|a, b| {
            a.dim
                .cmp(&b.dim)
                .then_with(|| a.matroid.bases().cmp(b.matroid.bases()))
        });
        Ok(out)
    }

    pub fn bergman_f_vector(&self) -> Result<FVector, BergmanError> {
        let faces = self.bergman_faces()?;
        Ok(f_vector_of(faces.iter().map(|f| f.dim), self.rank() - 1))
    }

    /// `None` when every interval matroid `M[F, G]` with `G` a connected flat
    /// and `F ⊊ G` a flat is connected (the nested set complex then equals
    /// the Bergman complex); otherwise the first failing pair `(F, G)`.
    pub fn equality_witness(&self) -> Option<(Flat, Flat)> {
        let top = self.lattice.top();
        let uppers = self.minimal.vertices.iter().chain(std::iter::once(&top));
        for &g in uppers {
            for &f in self.lattice.flats() {
                if f.mask == g.mask || !f.mask.is_subset(g.mask) {
                    continue;
                }
                let interval = self
                    .matroid
                    .interval_matroid(f.mask, g.mask)
                    .expect("flats");
                if !interval.matroid.is_connected() {
                    return Some((f, g));
                }
            }
        }
        None
    }

    pub fn equality_criterion(&self) -> bool {
        self.equality_witness().is_none()
    }

    /// Looks up a flat by mask.
    pub fn flat_of(&self, mask: SubsetMask) -> Option<Flat> {
        self.lattice.id_of(mask).map(|id| self.lattice.flat(id))
    }

    /// Rank-annotated flat for a mask known to be in the lattice.
    pub fn flat_unchecked(&self, mask: SubsetMask) -> Flat {
        self.flat(mask)
    }
}

fn maximal_only(faces: Vec<NestedSet>) -> Vec<NestedSet> {
    let mut non_maximal: HashSet<Vec<Flat>> = HashSet::new();
    for s in &faces {
        for k in 0..s.members.len() {
            let mut sub = s.members.clone();
            sub.remove(k);
            non_maximal.insert(sub);
        }
    }
    let mut out: Vec<NestedSet> = faces
        .into_iter()
        .filter(|s| !non_maximal.contains(&s.members))
        .collect();
    out.sort();
    out
}

fn f_vector_of<I: IntoIterator<Item = usize>>(dims: I, len: usize) -> FVector {
    let mut counts = vec![0; len];
    for d in dims {
        if d >= counts.len() {
            counts.resize(d + 1, 0);
        }
        counts[d] += 1;
    }
    FVector(counts)
}

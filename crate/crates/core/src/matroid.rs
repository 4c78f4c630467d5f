//! Matroids given by their bases, with the usual derived structure: rank,
//! closure, circuits, duality, minors, direct sums, connectivity and the
//! face matroids `M_w` of the matroid polytope.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::linalg::RationalMatrix;
use crate::subset::{k_subsets, SubsetMask, MAX_ELEMENTS};
use crate::weights::WeightVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("ground set of {0} elements exceeds the supported maximum of 64")]
    TooLarge(usize),
    #[error("the family of bases is empty")]
    EmptyBases,
    #[error("basis {basis} has {found} elements, expected {expected}")]
    WrongCardinality {
        basis: SubsetMask,
        found: usize,
        expected: usize,
    },
    #[error("set {set} mentions an element outside 1..{n}")]
    ElementOutOfRange { set: SubsetMask, n: usize },
    #[error(
        "basis exchange fails: removing {} from {sigma} admits no replacement from {tau}",
        .element + 1
    )]
    ExchangeAxiomViolated {
        sigma: SubsetMask,
        tau: SubsetMask,
        element: usize,
    },
    #[error("circuit family is not an antichain: {smaller} is contained in {larger}")]
    NotAnAntichain {
        smaller: SubsetMask,
        larger: SubsetMask,
    },
    #[error("the empty set cannot be a circuit")]
    EmptyCircuit,
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("edge {} is a loop at vertex {}", .edge + 1, .vertex + 1)]
    GraphLoopEdge { edge: usize, vertex: usize },
    #[error("edge {} mentions vertex {} but the graph has {vertices} vertices", .edge + 1, .vertex + 1)]
    VertexOutOfRange {
        edge: usize,
        vertex: usize,
        vertices: usize,
    },
    #[error("the matrix is zero")]
    ZeroMatrix,
    #[error("uniform matroid needs 0 < r <= n, got r = {rank}, n = {n}")]
    BadParameters { rank: usize, n: usize },
    #[error("{0} is not a flat")]
    NotAFlat(SubsetMask),
    #[error("{lower} is not contained in {upper}")]
    NotNested {
        lower: SubsetMask,
        upper: SubsetMask,
    },
    #[error("weight vector has {got} entries, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

/// A matroid of rank `r` on `{0, .., n-1}`, stored as its canonically sorted
/// list of bases. Two values are equal iff they have the same ground set size
/// and the same bases.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matroid {
    n: usize,
    rank: usize,
    bases: Vec<SubsetMask>,
}

/// The result of restricting or contracting: a matroid on a new ground set
/// `{0, .., k-1}` together with the original element behind each new label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minor {
    pub matroid: Matroid,
    /// `labels[new] = old`.
    pub labels: Vec<usize>,
}

impl Minor {
    /// New label of an original element, if it survived.
    pub fn new_label(&self, old: usize) -> Option<usize> {
        self.labels.iter().position(|&e| e == old)
    }

    /// Translates a subset of the minor's ground set back to original labels.
    pub fn lift(&self, set: SubsetMask) -> SubsetMask {
        set.iter().map(|e| self.labels[e]).collect()
    }
}

/// Disjoint blocks covering the ground set, sorted by minimum element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComponentPartition {
    pub blocks: Vec<SubsetMask>,
}

impl ComponentPartition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

fn check_size(n: usize) -> Result<(), MatroidError> {
    if n > MAX_ELEMENTS {
        Err(MatroidError::TooLarge(n))
    } else {
        Ok(())
    }
}

/// Packs the elements of `set` (all inside `support`) into consecutive
/// labels following the order of `support`.
fn compress(set: SubsetMask, support: SubsetMask) -> SubsetMask {
    support
        .iter()
        .enumerate()
        .filter(|&(_, e)| set.contains(e))
        .map(|(k, _)| k)
        .collect()
}

/// Depth-first enumeration of the maximum-size sets of a hereditary family
/// given by its membership test.
fn maximum_independent_sets<F>(n: usize, target: Option<usize>, independent: F) -> Vec<SubsetMask>
where
    F: Fn(SubsetMask, usize) -> bool,
{
    struct Search<'a, F> {
        n: usize,
        target: Option<usize>,
        independent: &'a F,
        best: usize,
        found: Vec<SubsetMask>,
    }

    impl<F: Fn(SubsetMask, usize) -> bool> Search<'_, F> {
        fn go(&mut self, current: SubsetMask, next: usize) {
            let size = current.len();
            match size.cmp(&self.best) {
                Ordering::Greater => {
                    self.best = size;
                    self.found.clear();
                    self.found.push(current);
                }
                Ordering::Equal => self.found.push(current),
                Ordering::Less => {}
            }
            if self.target == Some(size) {
                return;
            }
            let goal = self.target.unwrap_or(self.best);
            for e in next..self.n {
                // Not enough elements left to reach the goal size.
                if size + (self.n - e) < goal {
                    break;
                }
                let candidate = current.with(e);
                if (self.independent)(candidate, e) {
                    self.go(candidate, e + 1);
                }
            }
        }
    }

    let mut search = Search {
        n,
        target,
        independent: &independent,
        best: 0,
        found: Vec::new(),
    };
    search.go(SubsetMask::EMPTY, 0);
    if let Some(t) = target {
        search.found.retain(|s| s.len() == t);
    }
    search.found
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

impl Matroid {
    /// Validated construction from a list of bases.
    pub fn from_bases<I>(n: usize, rank: usize, bases: I) -> Result<Self, MatroidError>
    where
        I: IntoIterator<Item = SubsetMask>,
    {
        let m = Self::from_bases_unvalidated(n, rank, bases)?;
        m.check_exchange()?;
        Ok(m)
    }

    /// Construction for families that satisfy basis exchange by construction
    /// (duals, minors, sums, linear and graphic matroids). Only shape checks
    /// are performed.
    pub fn from_bases_trusted<I>(n: usize, rank: usize, bases: I) -> Result<Self, MatroidError>
    where
        I: IntoIterator<Item = SubsetMask>,
    {
        Self::from_bases_unvalidated(n, rank, bases)
    }

    fn from_bases_unvalidated<I>(n: usize, rank: usize, bases: I) -> Result<Self, MatroidError>
    where
        I: IntoIterator<Item = SubsetMask>,
    {
        check_size(n)?;
        let mut bases: Vec<SubsetMask> = bases.into_iter().collect();
        for &b in &bases {
            if !b.fits(n) {
                return Err(MatroidError::ElementOutOfRange { set: b, n });
            }
            if b.len() != rank {
                return Err(MatroidError::WrongCardinality {
                    basis: b,
                    found: b.len(),
                    expected: rank,
                });
            }
        }
        if bases.is_empty() {
            return Err(MatroidError::EmptyBases);
        }
        bases.sort_unstable();
        bases.dedup();
        Ok(Matroid { n, rank, bases })
    }

    /// All `rank`-subsets of `[n]` except the listed non-bases.
    pub fn from_nonbases<I>(n: usize, rank: usize, nonbases: I) -> Result<Self, MatroidError>
    where
        I: IntoIterator<Item = SubsetMask>,
    {
        check_size(n)?;
        if rank > n {
            return Err(MatroidError::BadParameters { rank, n });
        }
        let mut excluded: Vec<SubsetMask> = nonbases.into_iter().collect();
        for &s in &excluded {
            if !s.fits(n) {
                return Err(MatroidError::ElementOutOfRange { set: s, n });
            }
            if s.len() != rank {
                return Err(MatroidError::WrongCardinality {
                    basis: s,
                    found: s.len(),
                    expected: rank,
                });
            }
        }
        excluded.sort_unstable();
        let bases = k_subsets(n, rank).filter(|s| excluded.binary_search(s).is_err());
        Self::from_bases(n, rank, bases)
    }

    /// The matroid whose dependent sets are the supersets of the given
    /// circuits.
    pub fn from_circuits<I>(n: usize, circuits: I) -> Result<Self, MatroidError>
    where
        I: IntoIterator<Item = SubsetMask>,
    {
        check_size(n)?;
        let mut circuits: Vec<SubsetMask> = circuits.into_iter().collect();
        circuits.sort_unstable();
        circuits.dedup();
        for &c in &circuits {
            if c.is_empty() {
                return Err(MatroidError::EmptyCircuit);
            }
            if !c.fits(n) {
                return Err(MatroidError::ElementOutOfRange { set: c, n });
            }
        }
        for &a in &circuits {
            for &b in &circuits {
                if a != b && a.is_subset(b) {
                    return Err(MatroidError::NotAnAntichain {
                        smaller: a,
                        larger: b,
                    });
                }
            }
        }
        // Adding `e` creates a dependency iff some circuit through `e` fits.
        let bases = maximum_independent_sets(n, None, |set, e| {
            !circuits.iter().any(|c| c.contains(e) && c.is_subset(set))
        });
        let rank = bases.first().map_or(0, |b| b.len());
        Self::from_bases(n, rank, bases)
    }

    /// The cycle matroid of a connected multigraph; ground set = edges in
    /// input order, bases = spanning trees. Vertices are 0-based.
    pub fn from_graph(vertices: usize, edges: &[(usize, usize)]) -> Result<Self, MatroidError> {
        check_size(edges.len())?;
        for (k, &(u, v)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= vertices {
                    return Err(MatroidError::VertexOutOfRange {
                        edge: k,
                        vertex: w,
                        vertices,
                    });
                }
            }
            if u == v {
                return Err(MatroidError::GraphLoopEdge { edge: k, vertex: u });
            }
        }
        let mut uf = UnionFind::new(vertices);
        let merged = edges.iter().filter(|&&(u, v)| uf.union(u, v)).count();
        if vertices == 0 || merged + 1 != vertices {
            return Err(MatroidError::DisconnectedGraph);
        }
        let is_forest = |set: SubsetMask, _: usize| {
            let mut uf = UnionFind::new(vertices);
            set.iter().all(|k| uf.union(edges[k].0, edges[k].1))
        };
        let rank = vertices - 1;
        let bases = maximum_independent_sets(edges.len(), Some(rank), is_forest);
        Self::from_bases_trusted(edges.len(), rank, bases)
    }

    /// The column matroid of a rational matrix.
    pub fn from_vectors(matrix: &RationalMatrix) -> Result<Self, MatroidError> {
        let n = matrix.cols();
        check_size(n)?;
        if matrix.rows() == 0 || matrix.is_zero() {
            return Err(MatroidError::ZeroMatrix);
        }
        let rank = matrix.rank();
        let bases = maximum_independent_sets(n, Some(rank), |set, _| {
            let cols: Vec<usize> = set.iter().collect();
            matrix.column_rank(&cols) == cols.len()
        });
        Self::from_bases_trusted(n, rank, bases)
    }

    /// The uniform matroid `U(rank, n)`.
    pub fn uniform(rank: usize, n: usize) -> Result<Self, MatroidError> {
        check_size(n)?;
        if rank == 0 || rank > n {
            return Err(MatroidError::BadParameters { rank, n });
        }
        Self::from_bases_trusted(n, rank, k_subsets(n, rank))
    }

    /// The free matroid on `n` elements (single basis `[n]`).
    pub fn free(n: usize) -> Result<Self, MatroidError> {
        check_size(n)?;
        Self::from_bases_trusted(n, n, [SubsetMask::full(n)])
    }

    /// Checks pairwise basis exchange and reports the first violation.
    pub fn check_exchange(&self) -> Result<(), MatroidError> {
        for &sigma in &self.bases {
            for &tau in &self.bases {
                let extra = tau.difference(sigma);
                for i in sigma.difference(tau) {
                    let base = sigma.without(i);
                    if !extra.iter().any(|j| self.is_basis(base.with(j))) {
                        return Err(MatroidError::ExchangeAxiomViolated {
                            sigma,
                            tau,
                            element: i,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ground_set(&self) -> SubsetMask {
        SubsetMask::full(self.n)
    }

    /// Bases in canonical (increasing integer) order.
    pub fn bases(&self) -> &[SubsetMask] {
        &self.bases
    }

    pub fn num_bases(&self) -> usize {
        self.bases.len()
    }

    pub fn is_basis(&self, set: SubsetMask) -> bool {
        self.bases.binary_search(&set).is_ok()
    }

    pub fn is_independent(&self, set: SubsetMask) -> bool {
        self.bases.iter().any(|&b| set.is_subset(b))
    }

    /// `max |σ ∩ S|` over all bases σ.
    pub fn rank_of(&self, set: SubsetMask) -> usize {
        self.bases
            .iter()
            .map(|b| b.intersection(set).len())
            .max()
            .unwrap_or(0)
    }

    /// The smallest flat containing `set`.
    ///
    /// An element `e ∉ S` lies outside the closure iff some basis meets `S`
    /// in `rank(S)` elements and contains `e`.
    pub fn closure(&self, set: SubsetMask) -> SubsetMask {
        let r = self.rank_of(set);
        let escaping = self
            .bases
            .iter()
            .filter(|b| b.intersection(set).len() == r)
            .fold(SubsetMask::EMPTY, |acc, b| acc.union(b.difference(set)));
        self.ground_set().difference(escaping)
    }

    pub fn is_flat(&self, set: SubsetMask) -> bool {
        set.fits(self.n) && self.closure(set) == set
    }

    /// Elements contained in no basis.
    pub fn loops(&self) -> SubsetMask {
        let covered = self
            .bases
            .iter()
            .fold(SubsetMask::EMPTY, |acc, &b| acc.union(b));
        self.ground_set().difference(covered)
    }

    pub fn has_loops(&self) -> bool {
        !self.loops().is_empty()
    }

    /// Elements contained in every basis.
    pub fn coloops(&self) -> SubsetMask {
        self.bases
            .iter()
            .fold(self.ground_set(), |acc, &b| acc.intersection(b))
    }

    /// The unique circuit inside `basis ∪ {e}` for `e ∉ basis`.
    pub fn fundamental_circuit(&self, basis: SubsetMask, e: usize) -> SubsetMask {
        debug_assert!(!basis.contains(e));
        basis
            .iter()
            .filter(|&b| self.is_basis(basis.without(b).with(e)))
            .fold(SubsetMask::singleton(e), SubsetMask::with)
    }

    /// All inclusion-minimal dependent sets, sorted.
    ///
    /// Every circuit `C` is the fundamental circuit of any `e ∈ C` with
    /// respect to a basis extending `C ∖ {e}`, so it suffices to collect the
    /// fundamental circuits of all bases.
    pub fn circuits(&self) -> Vec<SubsetMask> {
        let mut out: Vec<SubsetMask> = self
            .bases
            .iter()
            .flat_map(|&b| {
                b.complement(self.n)
                    .iter()
                    .map(move |e| self.fundamental_circuit(b, e))
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Connected components. Loops and coloops are singleton blocks.
    ///
    /// Uses the fundamental circuits of a single basis; their overlap graph
    /// has the same components as the full circuit relation.
    pub fn connected_components(&self) -> ComponentPartition {
        let basis = self.bases[0];
        let mut uf = UnionFind::new(self.n);
        for e in basis.complement(self.n) {
            for x in self.fundamental_circuit(basis, e) {
                uf.union(e, x);
            }
        }
        let mut blocks: Vec<SubsetMask> = Vec::new();
        let mut block_of_root = vec![usize::MAX; self.n];
        for e in 0..self.n {
            let root = uf.find(e);
            if block_of_root[root] == usize::MAX {
                block_of_root[root] = blocks.len();
                blocks.push(SubsetMask::EMPTY);
            }
            let k = block_of_root[root];
            blocks[k] = blocks[k].with(e);
        }
        ComponentPartition { blocks }
    }

    pub fn num_components(&self) -> usize {
        self.connected_components().len()
    }

    pub fn is_connected(&self) -> bool {
        self.num_components() == 1
    }

    /// The matroid whose bases are the complements of the bases.
    pub fn dual(&self) -> Matroid {
        let bases = self.bases.iter().map(|b| b.complement(self.n));
        Self::from_bases_trusted(self.n, self.n - self.rank, bases).expect("dual of a matroid")
    }

    fn ensure_flat(&self, set: SubsetMask) -> Result<(), MatroidError> {
        if self.is_flat(set) {
            Ok(())
        } else {
            Err(MatroidError::NotAFlat(set))
        }
    }

    /// `M[∅, F]`, relabeled onto `{0, .., |F|-1}`.
    pub fn restriction(&self, flat: SubsetMask) -> Result<Minor, MatroidError> {
        self.ensure_flat(flat)?;
        self.interval_unchecked(SubsetMask::EMPTY, flat)
    }

    /// `M[F, [n]]` on the complement of `F`.
    pub fn contraction(&self, flat: SubsetMask) -> Result<Minor, MatroidError> {
        self.ensure_flat(flat)?;
        self.interval_unchecked(flat, self.ground_set())
    }

    /// `M[F, G]`: the restriction to `G` contracted at `F`, on ground set
    /// `G ∖ F`. Its rank is `rank(G) - rank(F)`.
    pub fn interval_matroid(
        &self,
        lower: SubsetMask,
        upper: SubsetMask,
    ) -> Result<Minor, MatroidError> {
        self.ensure_flat(lower)?;
        self.ensure_flat(upper)?;
        if !lower.is_subset(upper) {
            return Err(MatroidError::NotNested { lower, upper });
        }
        self.interval_unchecked(lower, upper)
    }

    fn interval_unchecked(
        &self,
        lower: SubsetMask,
        upper: SubsetMask,
    ) -> Result<Minor, MatroidError> {
        let (rl, ru) = (self.rank_of(lower), self.rank_of(upper));
        let support = upper.difference(lower);
        let bases = self
            .bases
            .iter()
            .filter(|b| b.intersection(upper).len() == ru && b.intersection(lower).len() == rl)
            .map(|b| compress(b.intersection(support), support));
        let matroid = Self::from_bases_trusted(support.len(), ru - rl, bases)?;
        Ok(Minor {
            matroid,
            labels: support.iter().collect(),
        })
    }

    /// Direct sum; the second summand's elements are shifted by `self.n`.
    pub fn direct_sum(&self, other: &Matroid) -> Result<Matroid, MatroidError> {
        let n = self.n + other.n;
        check_size(n)?;
        // `b << 64` would overflow; only reachable when `other` is empty.
        if other.n == 0 {
            return Ok(self.clone());
        }
        let shift = self.n;
        let bases = self.bases.iter().flat_map(|&a| {
            other
                .bases
                .iter()
                .map(move |&b| SubsetMask(a.0 | (b.0 << shift)))
        });
        Self::from_bases_trusted(n, self.rank + other.rank, bases)
    }

    /// Direct sum of matroids placed on prescribed disjoint parts of `[n]`.
    /// Each part lists the original elements behind the summand's labels.
    pub fn direct_sum_on(n: usize, parts: &[(Matroid, Vec<usize>)]) -> Result<Matroid, MatroidError> {
        let mut bases = vec![SubsetMask::EMPTY];
        let mut rank = 0;
        for (m, labels) in parts {
            rank += m.rank;
            let lifted: Vec<SubsetMask> = m
                .bases
                .iter()
                .map(|b| b.iter().map(|e| labels[e]).collect())
                .collect();
            bases = bases
                .iter()
                .flat_map(|&a| lifted.iter().map(move |&b| a.union(b)))
                .collect();
        }
        Self::from_bases_trusted(n, rank, bases)
    }

    /// The face matroid selected by a weight function on bases: the bases of
    /// maximal weight.
    pub fn max_weight_by<T, F>(&self, weight: F) -> Matroid
    where
        T: Ord,
        F: Fn(SubsetMask) -> T,
    {
        let weighted: Vec<(T, SubsetMask)> = self.bases.iter().map(|&b| (weight(b), b)).collect();
        let best = weighted.iter().map(|(w, _)| w).max().expect("nonempty bases");
        let bases: Vec<SubsetMask> = weighted
            .iter()
            .filter(|(w, _)| w == best)
            .map(|&(_, b)| b)
            .collect();
        Matroid {
            n: self.n,
            rank: self.rank,
            bases,
        }
    }

    /// `M_w` for integer weights.
    pub fn max_weight_integer(&self, w: &[i64]) -> Result<Matroid, MatroidError> {
        if w.len() != self.n {
            return Err(MatroidError::LengthMismatch {
                expected: self.n,
                got: w.len(),
            });
        }
        Ok(self.max_weight_by(|b| b.iter().map(|e| w[e]).sum::<i64>()))
    }

    /// `M_w`: the bases of maximal `w`-cost, compared exactly.
    pub fn max_weight_matroid(&self, w: &WeightVector) -> Result<Matroid, MatroidError> {
        if w.len() != self.n {
            return Err(MatroidError::LengthMismatch {
                expected: self.n,
                got: w.len(),
            });
        }
        let w = w.as_slice();
        Ok(self.max_weight_by(|b| {
            b.iter()
                .fold(BigRational::zero(), |acc, e| acc + &w[e])
        }))
    }
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matroid")
            .field("n", &self.n)
            .field("rank", &self.rank)
            .field("bases", &self.bases)
            .finish()
    }
}

impl fmt::Display for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "matroid of rank {} on {} elements with {} bases",
            self.rank,
            self.n,
            self.bases.len()
        )
    }
}

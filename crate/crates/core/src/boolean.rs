//! Building sets and nested sets in the Boolean lattice of subsets of
//! `[r]`: building closures, the vertices and facet right-hand sides of the
//! Minkowski sum of simplices `Δ_F`, labeled trees, and maximal nested sets.

use std::collections::HashSet;

use itertools::Itertools;
use thiserror::Error;

use crate::subset::SubsetMask;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BooleanError {
    #[error("family member {set} is empty or leaves 1..{r}")]
    BadMember { set: SubsetMask, r: usize },
    #[error("the family is not nested")]
    NotNested,
    #[error("the full set is missing")]
    TopMissing,
    #[error("not a permutation of 1..{0}")]
    NotAPermutation(usize),
}

/// A family of nonempty subsets of `{0, .., r-1}`, kept sorted and
/// duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BooleanFamily {
    r: usize,
    sets: Vec<SubsetMask>,
}

impl BooleanFamily {
    pub fn new<I: IntoIterator<Item = SubsetMask>>(r: usize, sets: I) -> Result<Self, BooleanError> {
        let mut sets: Vec<SubsetMask> = sets.into_iter().collect();
        if let Some(&set) = sets.iter().find(|s| s.is_empty() || !s.fits(r)) {
            return Err(BooleanError::BadMember { set, r });
        }
        sets.sort_unstable();
        sets.dedup();
        Ok(BooleanFamily { r, sets })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn sets(&self) -> &[SubsetMask] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, set: SubsetMask) -> bool {
        self.sets.binary_search(&set).is_ok()
    }

    pub fn top(&self) -> SubsetMask {
        SubsetMask::full(self.r)
    }

    /// All singletons present, and intersecting members have their union in
    /// the family.
    pub fn is_building(&self) -> bool {
        (0..self.r).all(|i| self.contains(SubsetMask::singleton(i)))
            && self.sets.iter().tuple_combinations().all(|(&a, &b)| {
                a.is_disjoint(b) || self.contains(a.union(b))
            })
    }

    /// The smallest building set containing the family: add the singletons,
    /// then saturate under unions of intersecting members.
    pub fn building_closure(&self) -> BooleanFamily {
        let mut members: HashSet<SubsetMask> = self.sets.iter().copied().collect();
        members.extend((0..self.r).map(SubsetMask::singleton));
        let mut frontier: Vec<SubsetMask> = members.iter().copied().collect();
        while let Some(a) = frontier.pop() {
            let fresh: Vec<SubsetMask> = members
                .iter()
                .filter(|b| !a.is_disjoint(**b))
                .map(|&b| a.union(b))
                .filter(|u| !members.contains(u))
                .collect();
            for u in fresh {
                if members.insert(u) {
                    frontier.push(u);
                }
            }
        }
        BooleanFamily::new(self.r, members).expect("closure stays inside [r]")
    }

    /// The vertex of `Δ_F` minimizing a weight vector whose increasing order
    /// is `order` (`order[0]` has the smallest weight): coordinate `e` counts
    /// the members whose earliest element under `order` is `e`.
    pub fn delta_vertex(&self, order: &[usize]) -> Result<Vec<usize>, BooleanError> {
        let position = permutation_positions(self.r, order)?;
        let mut v = vec![0; self.r];
        for &f in &self.sets {
            v[earliest(f, &position)] += 1;
        }
        Ok(v)
    }

    /// Right-hand side `δ_G = #{F : F ⊆ G}` of the inequality
    /// `Σ_{i∈G} x_i ≥ δ_G` on `Δ_F`.
    pub fn delta_facet_rhs(&self, g: SubsetMask) -> usize {
        self.sets.iter().filter(|f| f.is_subset(g)).count()
    }

    /// Nestedness with respect to this family as building set: no antichain
    /// of two or more members has its union in the family.
    pub fn is_nested(&self, candidate: &[SubsetMask]) -> bool {
        is_nested_by(candidate, |u| self.contains(u))
    }

    /// The unique labeled tree whose subtree unions below non-root nodes are
    /// `nested ∖ {[r]}`.
    pub fn tree_from_nested(&self, nested: &[SubsetMask]) -> Result<FTree, BooleanError> {
        let top = self.top();
        if !nested.contains(&top) {
            return Err(BooleanError::TopMissing);
        }
        if nested.iter().any(|s| !self.contains(*s)) || !self.is_nested(nested) {
            return Err(BooleanError::NotNested);
        }
        let mut members: Vec<SubsetMask> = nested.iter().copied().filter(|&s| s != top).collect();
        members.sort_unstable();
        members.dedup();
        FTree::from_laminar(top, &members).ok_or(BooleanError::NotNested)
    }

    /// Maximal nested sets (each of size `r - 1`, excluding `[r]`), one per
    /// vertex of `Δ_F`: for an ordering of `[r]`, each non-first element `i`
    /// contributes the union of the members whose earliest element is `i`.
    pub fn maximal_nested_sets(&self) -> Result<Vec<Vec<SubsetMask>>, BooleanError> {
        if !self.contains(self.top()) {
            return Err(BooleanError::TopMissing);
        }
        let mut facets: HashSet<Vec<SubsetMask>> = HashSet::new();
        for order in (0..self.r).permutations(self.r) {
            facets.insert(self.nested_set_of_order(&order));
        }
        let mut out: Vec<Vec<SubsetMask>> = facets.into_iter().collect();
        out.sort();
        Ok(out)
    }

    fn nested_set_of_order(&self, order: &[usize]) -> Vec<SubsetMask> {
        let position = permutation_positions(self.r, order).expect("generated permutation");
        let mut unions = vec![SubsetMask::EMPTY; self.r];
        for &f in &self.sets {
            let e = earliest(f, &position);
            unions[e] = unions[e].union(f);
        }
        let mut facet: Vec<SubsetMask> = order[1..].iter().map(|&i| unions[i]).collect();
        facet.sort_unstable();
        facet
    }
}

fn permutation_positions(r: usize, order: &[usize]) -> Result<Vec<usize>, BooleanError> {
    let mut position = vec![usize::MAX; r];
    if order.len() != r {
        return Err(BooleanError::NotAPermutation(r));
    }
    for (k, &e) in order.iter().enumerate() {
        if e >= r || position[e] != usize::MAX {
            return Err(BooleanError::NotAPermutation(r));
        }
        position[e] = k;
    }
    Ok(position)
}

fn earliest(set: SubsetMask, position: &[usize]) -> usize {
    set.iter()
        .min_by_key(|&e| position[e])
        .expect("members are nonempty")
}

/// Generic nestedness test: no antichain of size at least two among
/// `candidate` has a union accepted by `in_building`.
pub fn is_nested_by<F: Fn(SubsetMask) -> bool>(candidate: &[SubsetMask], in_building: F) -> bool {
    fn extend<F: Fn(SubsetMask) -> bool>(
        items: &[SubsetMask],
        start: usize,
        chosen: &mut Vec<SubsetMask>,
        in_building: &F,
    ) -> bool {
        for k in start..items.len() {
            let x = items[k];
            if chosen.iter().any(|&c| c.is_subset(x) || x.is_subset(c)) {
                continue;
            }
            chosen.push(x);
            let union = chosen.iter().fold(SubsetMask::EMPTY, |a, &c| a.union(c));
            let ok = (chosen.len() < 2 || !in_building(union))
                && extend(items, k + 1, chosen, in_building);
            chosen.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    extend(candidate, 0, &mut Vec::new(), &in_building)
}

/// A rooted tree whose nodes carry pairwise disjoint nonempty labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FTree {
    nodes: Vec<FTreeNode>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FTreeNode {
    pub label: SubsetMask,
    pub children: Vec<usize>,
}

impl FTree {
    /// Builds the tree of a laminar family below `top`; returns `None` if
    /// two members overlap without nesting or some label comes out empty.
    pub fn from_laminar(top: SubsetMask, members: &[SubsetMask]) -> Option<FTree> {
        let mut tree = FTree { nodes: Vec::new() };
        tree.attach(top, members)?;
        Some(tree)
    }

    fn attach(&mut self, node_set: SubsetMask, members: &[SubsetMask]) -> Option<usize> {
        let inside: Vec<SubsetMask> = members
            .iter()
            .copied()
            .filter(|&s| s != node_set && s.is_subset(node_set))
            .collect();
        let maximal: Vec<SubsetMask> = inside
            .iter()
            .copied()
            .filter(|&s| !inside.iter().any(|&t| t != s && s.is_subset(t)))
            .collect();
        let covered = maximal.iter().try_fold(SubsetMask::EMPTY, |acc, &s| {
            acc.is_disjoint(s).then(|| acc.union(s))
        })?;
        let label = node_set.difference(covered);
        if label.is_empty() {
            return None;
        }
        let id = self.nodes.len();
        self.nodes.push(FTreeNode {
            label,
            children: Vec::new(),
        });
        for child in maximal {
            let c = self.attach(child, &inside)?;
            self.nodes[id].children.push(c);
        }
        Some(id)
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn nodes(&self) -> &[FTreeNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Union of the labels in the subtree at `id`, including `id`.
    pub fn at_or_below(&self, id: usize) -> SubsetMask {
        self.nodes[id]
            .children
            .iter()
            .fold(self.nodes[id].label, |acc, &c| acc.union(self.at_or_below(c)))
    }

    /// Union of the labels strictly below `id`.
    pub fn below(&self, id: usize) -> SubsetMask {
        self.at_or_below(id).difference(self.nodes[id].label)
    }

    /// `{T_{≤ν} : ν non-root}`, sorted.
    pub fn sets(&self) -> Vec<SubsetMask> {
        let mut out: Vec<SubsetMask> = (1..self.nodes.len()).map(|id| self.at_or_below(id)).collect();
        out.sort_unstable();
        out
    }

    /// Whether every subtree union below a non-root node is in the family.
    pub fn is_tree_of(&self, family: &BooleanFamily) -> bool {
        self.sets().into_iter().all(|s| family.contains(s))
    }
}

//! Subsets of a ground set `{0, .., n-1}` packed into one machine word.

use std::fmt;

/// Largest supported ground set.
pub const MAX_ELEMENTS: usize = 64;

/// A subset of the ground set, one bit per element.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetMask(pub u64);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    /// The full ground set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_ELEMENTS);
        if n == 64 {
            SubsetMask(u64::MAX)
        } else {
            SubsetMask((1u64 << n) - 1)
        }
    }

    pub fn singleton(e: usize) -> Self {
        SubsetMask(1u64 << e)
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Self {
        elements
            .into_iter()
            .fold(SubsetMask::EMPTY, |acc, e| acc.with(e))
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, e: usize) -> bool {
        e < 64 && self.0 >> e & 1 == 1
    }

    #[inline]
    pub fn with(self, e: usize) -> Self {
        SubsetMask(self.0 | 1u64 << e)
    }

    #[inline]
    pub fn without(self, e: usize) -> Self {
        SubsetMask(self.0 & !(1u64 << e))
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        SubsetMask(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        SubsetMask(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        SubsetMask(self.0 & !other.0)
    }

    /// Complement within `{0, .., n-1}`.
    #[inline]
    pub fn complement(self, n: usize) -> Self {
        SubsetMask(!self.0 & Self::full(n).0)
    }

    #[inline]
    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest element, if any.
    #[inline]
    pub fn min_element(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Largest element that is `< n`, i.e. whether all bits lie below `n`.
    pub fn fits(self, n: usize) -> bool {
        self.is_subset(Self::full(n))
    }

    pub fn iter(self) -> Elements {
        Elements(self.0)
    }

    /// 1-based labels, ascending.
    pub fn labels(self) -> Vec<usize> {
        self.iter().map(|e| e + 1).collect()
    }
}

impl IntoIterator for SubsetMask {
    type Item = usize;
    type IntoIter = Elements;

    fn into_iter(self) -> Elements {
        self.iter()
    }
}

impl FromIterator<usize> for SubsetMask {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        SubsetMask::from_elements(iter)
    }
}

/// Ascending iterator over the elements of a [`SubsetMask`].
#[derive(Clone, Debug)]
pub struct Elements(u64);

impl Iterator for Elements {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for Elements {}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.labels()).finish()
    }
}

/// Prints 1-based labels, e.g. `{1,3,4}`.
impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, label) in self.labels().into_iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{label}")?;
        }
        f.write_str("}")
    }
}

/// All `k`-element subsets of `{0, .., n-1}` in increasing integer order.
pub fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = SubsetMask> {
    // Gosper's hack; the `done` flag covers k = 0 and the last subset.
    let limit = SubsetMask::full(n).0;
    let start = if k == 0 { 0 } else { SubsetMask::full(k).0 };
    let mut next = (k <= n).then_some(start);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur.wrapping_add(c);
            if r == 0 {
                None
            } else {
                let nxt = (((r ^ cur) >> 2) / c) | r;
                (nxt & !limit == 0).then_some(nxt)
            }
        };
        Some(SubsetMask(cur))
    })
}

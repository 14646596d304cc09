//! Koszul complexes of the full variable sequence with coefficients in a
//! free module, a monomial ideal or its quotient ring; multigraded strands
//! and their homology over GF(p).

mod element;
mod homology;
mod strand;

use std::cmp::Ordering;
use std::sync::Arc;

use crate::monomial::MonomialIdeal;

pub use element::{term_multidegree, KoszulElement};
pub use homology::{
    depth, depth_with, homology_basis_cycles, homology_class_nonzero, homology_dimensions,
    strand_homology_rank, DepthOptions, DepthReport, Enumeration,
};
pub use strand::StrandComplex;

/// Strictly increasing index list `J`, stored as a bitmask. Ordered
/// lexicographically as a list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct IndexSet(u64);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn from_mask(mask: u64) -> Self {
        Self(mask)
    }

    pub fn from_indices(idx: &[usize]) -> Self {
        Self(idx.iter().fold(0, |m, &i| m | 1 << i))
    }

    #[inline]
    pub fn mask(self) -> u64 {
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
    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(self, i: usize) -> Self {
        Self(self.0 | 1 << i)
    }

    pub fn remove(self, i: usize) -> Self {
        Self(self.0 & !(1 << i))
    }

    pub fn max_index(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        crate::graph::bits(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// `e_A ∧ e_B = sign · e_{A ∪ B}`, or `None` when `A` and `B` meet.
    pub fn wedge(self, other: IndexSet) -> Option<(i8, IndexSet)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // one transposition per pair (a, b) with a in A, b in B, a > b
        let inversions: u32 = other.iter().map(|b| (self.0 >> b >> 1).count_ones()).sum();
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        Some((sign, IndexSet(self.0 | other.0)))
    }
}

impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.iter();
        let mut b = other.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) if x != y => return x.cmp(&y),
                _ => {}
            }
        }
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The coefficient module `M` of `K(x; M)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoefficientModule {
    /// The polynomial ring itself; every monomial is allowed.
    Free,
    /// A monomial ideal; coefficients must lie in it.
    Ideal(Arc<MonomialIdeal>),
    /// The quotient ring `S/I`; coefficients are monomials outside `I`.
    Quotient(Arc<MonomialIdeal>),
}

impl CoefficientModule {
    pub fn ideal(&self) -> Option<&MonomialIdeal> {
        match self {
            CoefficientModule::Free => None,
            CoefficientModule::Ideal(i) | CoefficientModule::Quotient(i) => Some(i),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CoefficientModule::Free => "free",
            CoefficientModule::Ideal(_) => "ideal",
            CoefficientModule::Quotient(_) => "quotient",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_set_order_is_lexicographic_on_lists() {
        let s = |v: &[usize]| IndexSet::from_indices(v);
        assert!(s(&[]) < s(&[0]));
        assert!(s(&[0]) < s(&[0, 1]));
        assert!(s(&[0, 5]) < s(&[1]));
        assert!(s(&[1, 2]) < s(&[1, 3]));
    }

    #[test]
    fn wedge_signs() {
        let s = |v: &[usize]| IndexSet::from_indices(v);
        assert_eq!(s(&[0]).wedge(s(&[1])), Some((1, s(&[0, 1]))));
        assert_eq!(s(&[1]).wedge(s(&[0])), Some((-1, s(&[0, 1]))));
        assert_eq!(s(&[0, 2]).wedge(s(&[1])), Some((-1, s(&[0, 1, 2]))));
        assert_eq!(s(&[1, 2]).wedge(s(&[0])), Some((1, s(&[0, 1, 2]))));
        assert_eq!(s(&[0]).wedge(s(&[0])), None);
    }
}

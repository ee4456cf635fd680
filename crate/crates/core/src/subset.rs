//! Dense bitset subsets of a small index universe.
//!
//! Expression sets, point sets and sets of basis indices all share this
//! representation. A universe holds at most [`MAX_UNIVERSE`] indices.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Largest universe a [`Subset`] can describe.
pub const MAX_UNIVERSE: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubsetError {
    #[error("index {index} is outside a universe of size {universe}")]
    OutOfRange { index: usize, universe: usize },
    #[error("universe of size {0} exceeds the supported maximum of {MAX_UNIVERSE}")]
    UniverseTooLarge(usize),
}

/// A subset of `0..universe`.
///
/// Ordering compares the bit patterns as integers, so `{2} < {1,2}` and
/// `{0} < {1}`. All canonical listings in this crate use that order.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subset {
    universe: u8,
    bits: u64,
}

/// A set of expression indices.
pub type ExprSet = Subset;
/// A set of point indices.
pub type PointSet = Subset;

fn mask(universe: usize) -> u64 {
    if universe >= 64 {
        u64::MAX
    } else {
        (1u64 << universe) - 1
    }
}

impl Subset {
    pub fn empty(universe: usize) -> Self {
        assert!(universe <= MAX_UNIVERSE, "universe too large");
        Subset { universe: universe as u8, bits: 0 }
    }

    pub fn full(universe: usize) -> Self {
        assert!(universe <= MAX_UNIVERSE, "universe too large");
        Subset { universe: universe as u8, bits: mask(universe) }
    }

    pub fn singleton(universe: usize, index: usize) -> Self {
        let mut s = Self::empty(universe);
        s.insert(index);
        s
    }

    /// Builds a subset, rejecting indices outside the universe.
    pub fn from_indices<I>(universe: usize, indices: I) -> Result<Self, SubsetError>
    where
        I: IntoIterator<Item = usize>,
    {
        if universe > MAX_UNIVERSE {
            return Err(SubsetError::UniverseTooLarge(universe));
        }
        let mut s = Self::empty(universe);
        for index in indices {
            if index >= universe {
                return Err(SubsetError::OutOfRange { index, universe });
            }
            s.bits |= 1 << index;
        }
        Ok(s)
    }

    pub fn from_bits(universe: usize, bits: u64) -> Result<Self, SubsetError> {
        if universe > MAX_UNIVERSE {
            return Err(SubsetError::UniverseTooLarge(universe));
        }
        if bits & !mask(universe) != 0 {
            let index = 63 - (bits & !mask(universe)).leading_zeros() as usize;
            return Err(SubsetError::OutOfRange { index, universe });
        }
        Ok(Subset { universe: universe as u8, bits })
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe as usize
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn contains(&self, index: usize) -> bool {
        index < self.universe() && self.bits & (1 << index) != 0
    }

    #[inline]
    pub fn insert(&mut self, index: usize) {
        assert!(index < self.universe(), "index {index} out of range");
        self.bits |= 1 << index;
    }

    #[inline]
    pub fn remove(&mut self, index: usize) {
        if index < self.universe() {
            self.bits &= !(1 << index);
        }
    }

    pub fn with(mut self, index: usize) -> Self {
        self.insert(index);
        self
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn is_full(&self) -> bool {
        self.bits == mask(self.universe())
    }

    #[inline]
    pub fn union(&self, other: &Self) -> Self {
        debug_assert_eq!(self.universe, other.universe);
        Subset { universe: self.universe, bits: self.bits | other.bits }
    }

    #[inline]
    pub fn intersection(&self, other: &Self) -> Self {
        debug_assert_eq!(self.universe, other.universe);
        Subset { universe: self.universe, bits: self.bits & other.bits }
    }

    #[inline]
    pub fn difference(&self, other: &Self) -> Self {
        debug_assert_eq!(self.universe, other.universe);
        Subset { universe: self.universe, bits: self.bits & !other.bits }
    }

    #[inline]
    pub fn complement(&self) -> Self {
        Subset { universe: self.universe, bits: !self.bits & mask(self.universe()) }
    }

    #[inline]
    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits & !other.bits == 0
    }

    #[inline]
    pub fn is_strict_subset(&self, other: &Self) -> bool {
        self.is_subset(other) && self.bits != other.bits
    }

    #[inline]
    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.bits & other.bits == 0
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        (self.bits != 0).then(|| self.bits.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> SubsetIter {
        SubsetIter { bits: self.bits }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Renders the members through a name table, e.g. `{m,top}`.
    pub fn display_with(&self, names: &[String]) -> String {
        let parts: Vec<&str> = self.iter().map(|i| names[i].as_str()).collect();
        format!("{{{}}}", parts.join(","))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bits.cmp(&other.bits).then(self.universe.cmp(&other.universe))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl IntoIterator for &Subset {
    type Item = usize;
    type IntoIter = SubsetIter;

    fn into_iter(self) -> SubsetIter {
        self.iter()
    }
}

pub struct SubsetIter {
    bits: u64,
}

impl Iterator for SubsetIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.bits == 0 {
            return None;
        }
        let i = self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.bits.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for SubsetIter {}

/// Intersection of a family; `None` when the family is empty.
pub fn intersect_all<'a, I>(family: I) -> Option<Subset>
where
    I: IntoIterator<Item = &'a Subset>,
{
    family.into_iter().fold(None, |acc, s| match acc {
        None => Some(*s),
        Some(a) => Some(a.intersection(s)),
    })
}

use crate::group::Elem;
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

/// A subset of the elements `0..universe` of some group, stored as a bitset.
///
/// Sets order by size first and then lexicographically by their sorted
/// member lists, which is the order every listing in the crate uses.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    universe: usize,
    words: Vec<u64>,
}

impl ElementSet {
    pub fn empty(universe: usize) -> ElementSet {
        ElementSet {
            universe,
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> ElementSet {
        let mut s = ElementSet::empty(universe);
        for x in 0..universe {
            s.insert(x);
        }
        s
    }

    /// The trivial subgroup `{1}`.
    pub fn identity_only(universe: usize) -> ElementSet {
        ElementSet::from_elems(universe, [0])
    }

    pub fn from_elems(universe: usize, elems: impl IntoIterator<Item = Elem>) -> ElementSet {
        let mut s = ElementSet::empty(universe);
        for x in elems {
            s.insert(x);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        x < self.universe && self.words[x / 64] >> (x % 64) & 1 == 1
    }

    /// Returns true if `x` was newly inserted.
    #[inline]
    pub fn insert(&mut self, x: Elem) -> bool {
        assert!(x < self.universe, "element {x} outside universe {}", self.universe);
        let w = &mut self.words[x / 64];
        let bit = 1u64 << (x % 64);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    pub fn remove(&mut self, x: Elem) {
        if x < self.universe {
            self.words[x / 64] &= !(1u64 << (x % 64));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// True when the set is `{1}`.
    pub fn is_trivial(&self) -> bool {
        self.len() == 1 && self.contains(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit)
            })
        })
    }

    pub fn members(&self) -> Vec<Elem> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        ElementSet {
            universe: self.universe,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        ElementSet {
            universe: self.universe,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }
}

impl Ord for ElementSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for ElementSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for ElementSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

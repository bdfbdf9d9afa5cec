//! Subsets of a small ground set `{1, ..., n}` packed into one machine word.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest supported ground-set size.
pub const MAX_N: u32 = 16;

/// An element of the ground set, numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(pub u8);

impl ElementId {
    pub fn new(value: u32) -> Option<Self> {
        (1..=MAX_N).contains(&value).then_some(ElementId(value as u8))
    }

    pub fn get(self) -> u32 {
        self.0 as u32
    }

    /// Zero-based bit position of this element.
    pub fn bit(self) -> u32 {
        self.0 as u32 - 1
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A subset of the ground set: bit `i - 1` is set iff element `i` is a member.
///
/// Masks compare by their numeric value, which is the canonical storage order
/// for family members.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SetMask(pub u16);

impl SetMask {
    pub const EMPTY: SetMask = SetMask(0);

    /// The whole ground set `{1, ..., n}`.
    pub fn full(n: u32) -> SetMask {
        debug_assert!(n <= MAX_N);
        SetMask(((1u32 << n) - 1) as u16)
    }

    pub fn from_elements<I: IntoIterator<Item = u32>>(elements: I) -> SetMask {
        let mut bits = 0u16;
        for e in elements {
            debug_assert!((1..=MAX_N).contains(&e));
            bits |= 1 << (e - 1);
        }
        SetMask(bits)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, e: ElementId) -> bool {
        self.0 >> e.bit() & 1 == 1
    }

    pub fn union(self, other: SetMask) -> SetMask {
        SetMask(self.0 | other.0)
    }

    pub fn intersection(self, other: SetMask) -> SetMask {
        SetMask(self.0 & other.0)
    }

    pub fn is_subset(self, other: SetMask) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: SetMask) -> bool {
        self.0 & other.0 == 0
    }

    /// True when no bit at position `>= n` is set.
    pub fn fits(self, n: u32) -> bool {
        n >= MAX_N || self.0 >> n == 0
    }

    /// Members in ascending order.
    pub fn elements(self) -> impl Iterator<Item = ElementId> {
        let bits = self.0;
        (0..MAX_N)
            .filter(move |i| bits >> i & 1 == 1)
            .map(|i| ElementId(i as u8 + 1))
    }

    /// Relabel members: element `i` becomes `image[i - 1]`.
    pub fn map(self, image: &[ElementId]) -> SetMask {
        let mut bits = 0u16;
        for e in self.elements() {
            bits |= 1 << image[e.bit() as usize].bit();
        }
        SetMask(bits)
    }
}

impl fmt::Display for SetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

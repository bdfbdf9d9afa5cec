//! Families of subsets of `{1, ..., n}` and their basic statistics.

use std::fmt;

use crate::error::{Error, Result};
use crate::mask::{ElementId, SetMask, MAX_N};

/// Largest `n` accepted by [`SetFamily::canonical_form`]; the scan visits all `n!` relabelings.
pub const CANONICAL_MAX_N: u32 = 8;

/// A nonempty family of distinct subsets of `{1, ..., n}`, stored in ascending
/// numeric order of their masks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetFamily {
    n: u32,
    members: Vec<SetMask>,
}

/// How many members must contain an element for it to count as abundant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AbundanceRule {
    /// `2 * count >= m`
    #[default]
    AtLeastHalf,
    /// `2 * count > m`
    MoreThanHalf,
}

impl AbundanceRule {
    pub fn is_abundant(self, count: u32, m: usize) -> bool {
        let twice = 2 * count as usize;
        match self {
            AbundanceRule::AtLeastHalf => twice >= m,
            AbundanceRule::MoreThanHalf => twice > m,
        }
    }
}

/// `counts[i - 1]` is the number of members containing element `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyProfile {
    pub counts: Vec<u32>,
}

impl FrequencyProfile {
    pub fn get(&self, e: ElementId) -> u32 {
        self.counts[e.bit() as usize]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }
}

/// `by_size[k]` is the number of members of cardinality `k`, for `k = 0..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeProfile {
    pub by_size: Vec<u32>,
}

impl SizeProfile {
    pub fn count(&self, k: usize) -> u32 {
        self.by_size.get(k).copied().unwrap_or(0)
    }

    /// Smallest positive size present, if any.
    pub fn min_nonempty_size(&self) -> Option<u32> {
        self.by_size
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, &c)| c > 0)
            .map(|(k, _)| k as u32)
    }
}

/// A bijection on `{1, ..., n}`; `images[i - 1]` is where element `i` goes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    images: Vec<ElementId>,
}

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let n = images.len() as u32;
        if n == 0 || n > MAX_N {
            return Err(Error::NotABijection(n));
        }
        let mut seen = 0u32;
        for &img in &images {
            if img == 0 || img > n || seen >> (img - 1) & 1 == 1 {
                return Err(Error::NotABijection(n));
            }
            seen |= 1 << (img - 1);
        }
        Ok(Permutation {
            images: images.into_iter().map(|v| ElementId(v as u8)).collect(),
        })
    }

    pub fn identity(n: u32) -> Self {
        Permutation {
            images: (1..=n).map(|v| ElementId(v as u8)).collect(),
        }
    }

    pub fn n(&self) -> u32 {
        self.images.len() as u32
    }

    pub fn apply(&self, e: ElementId) -> ElementId {
        self.images[e.bit() as usize]
    }

    pub fn images(&self) -> &[ElementId] {
        &self.images
    }
}

/// Fixed-size bitmap over all masks of width `n`.
pub(crate) struct Presence {
    words: Vec<u64>,
}

impl Presence {
    pub(crate) fn new(n: u32) -> Self {
        Presence {
            words: vec![0; (1usize << n).div_ceil(64)],
        }
    }

    pub(crate) fn insert(&mut self, m: SetMask) -> bool {
        let (w, b) = (m.index() / 64, m.index() % 64);
        let fresh = self.words[w] >> b & 1 == 0;
        self.words[w] |= 1 << b;
        fresh
    }
}

impl SetFamily {
    /// Build a family from arbitrary members; duplicates collapse and the
    /// result is sorted into storage order.
    pub fn new<I: IntoIterator<Item = SetMask>>(n: u32, members: I) -> Result<Self> {
        if !(1..=MAX_N).contains(&n) {
            return Err(Error::GroundSizeOutOfRange(n));
        }
        let mut members: Vec<SetMask> = members.into_iter().collect();
        if let Some(bad) = members.iter().find(|m| !m.fits(n)) {
            let top = 16 - bad.bits().leading_zeros();
            return Err(Error::ElementOutOfRange { element: top, n });
        }
        if members.is_empty() {
            return Err(Error::EmptyFamily);
        }
        members.sort_unstable();
        members.dedup();
        Ok(SetFamily { n, members })
    }

    /// Members must already be strictly ascending and fit in `n` bits.
    pub(crate) fn from_sorted_unchecked(n: u32, members: Vec<SetMask>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(members.iter().all(|m| m.fits(n)));
        SetFamily { n, members }
    }

    /// Convenience constructor from element lists, e.g. `&[&[], &[1, 2]]`.
    pub fn from_sets(n: u32, sets: &[&[u32]]) -> Result<Self> {
        let mut masks = Vec::with_capacity(sets.len());
        for set in sets {
            for &e in *set {
                if e == 0 || e > n.min(MAX_N) {
                    return Err(Error::ElementOutOfRange { element: e, n });
                }
            }
            masks.push(SetMask::from_elements(set.iter().copied()));
        }
        SetFamily::new(n, masks)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[SetMask] {
        &self.members
    }

    pub fn contains(&self, mask: SetMask) -> bool {
        self.members.binary_search(&mask).is_ok()
    }

    pub fn contains_empty(&self) -> bool {
        self.members.first() == Some(&SetMask::EMPTY)
    }

    /// The first pair `(A, B)` in storage order whose union is missing.
    pub fn union_violation(&self) -> Option<(SetMask, SetMask)> {
        for (i, &a) in self.members.iter().enumerate() {
            for &b in &self.members[i + 1..] {
                if !self.contains(a.union(b)) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_union_closed(&self) -> bool {
        self.union_violation().is_none()
    }

    /// The smallest union-closed family containing every member of `self`.
    pub fn union_closure(&self) -> SetFamily {
        let mut seen = Presence::new(self.n);
        let mut out: Vec<SetMask> = Vec::with_capacity(self.members.len());
        for &g in &self.members {
            seen.insert(g);
            out.push(g);
        }
        // Each new member is joined against everything before it, so every
        // pair is visited exactly once.
        let mut i = 0;
        while i < out.len() {
            let a = out[i];
            for j in 0..i {
                let u = a.union(out[j]);
                if seen.insert(u) {
                    out.push(u);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        SetFamily::from_sorted_unchecked(self.n, out)
    }

    /// Bitwise-or of all members.
    pub fn universe(&self) -> SetMask {
        self.members.iter().fold(SetMask::EMPTY, |acc, &m| acc.union(m))
    }

    /// `T(F)`: the smallest cardinality of a nonempty member.
    pub fn t_value(&self) -> Result<u32> {
        self.members
            .iter()
            .filter(|m| !m.is_empty())
            .map(|m| m.len())
            .min()
            .ok_or(Error::NoNonemptyMember)
    }

    pub fn frequency_profile(&self) -> FrequencyProfile {
        let mut counts = vec![0u32; self.n as usize];
        for m in &self.members {
            for e in m.elements() {
                counts[e.bit() as usize] += 1;
            }
        }
        FrequencyProfile { counts }
    }

    /// Elements contained in at least half of the members, ascending.
    pub fn abundant_elements(&self) -> Vec<ElementId> {
        self.abundant_elements_with(AbundanceRule::default())
    }

    pub fn abundant_elements_with(&self, rule: AbundanceRule) -> Vec<ElementId> {
        let m = self.m();
        self.frequency_profile()
            .counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| rule.is_abundant(c, m))
            .map(|(i, _)| ElementId(i as u8 + 1))
            .collect()
    }

    pub fn size_profile(&self) -> SizeProfile {
        let mut by_size = vec![0u32; self.n as usize + 1];
        for m in &self.members {
            by_size[m.len() as usize] += 1;
        }
        SizeProfile { by_size }
    }

    pub fn permute(&self, perm: &Permutation) -> Result<SetFamily> {
        if perm.n() != self.n {
            return Err(Error::NotABijection(self.n));
        }
        let mut out: Vec<SetMask> = self.members.iter().map(|m| m.map(perm.images())).collect();
        out.sort_unstable();
        Ok(SetFamily::from_sorted_unchecked(self.n, out))
    }

    /// Lexicographically smallest member sequence over every relabeling of the
    /// ground set.
    pub fn canonical_form(&self) -> Result<SetFamily> {
        if self.n > CANONICAL_MAX_N {
            return Err(Error::CanonicalBound {
                n: self.n,
                limit: CANONICAL_MAX_N,
            });
        }
        let mut best = self.members.clone();
        let mut scratch = Vec::with_capacity(self.members.len());
        for_each_permutation(self.n, |images| {
            scratch.clear();
            scratch.extend(self.members.iter().map(|m| m.map(images)));
            scratch.sort_unstable();
            if scratch < best {
                best.clone_from(&scratch);
            }
        });
        Ok(SetFamily::from_sorted_unchecked(self.n, best))
    }

    pub fn is_canonical(&self) -> Result<bool> {
        Ok(self.canonical_form()? == *self)
    }
}

/// Calls `f` with every permutation of `1..=n` (as image tables), starting
/// with the identity. Heap's algorithm.
pub fn for_each_permutation(n: u32, mut f: impl FnMut(&[ElementId])) {
    let n = n as usize;
    let mut images: Vec<ElementId> = (1..=n).map(|v| ElementId(v as u8)).collect();
    let mut c = vec![0usize; n];
    f(&images);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                images.swap(0, i);
            } else {
                images.swap(c[i], i);
            }
            f(&images);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

impl fmt::Display for SetFamily {
    /// Renders the family in the line-oriented text format with an `n=` header.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        for m in &self.members {
            if m.is_empty() {
                writeln!(f, "{{}}")?;
            } else {
                let parts: Vec<String> = m.elements().map(|e| e.to_string()).collect();
                writeln!(f, "{}", parts.join(","))?;
            }
        }
        Ok(())
    }
}

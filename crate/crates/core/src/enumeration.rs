//! Exhaustive generation of union-closed families `F` with `∅ ∈ F` and
//! `∪F = {1, ..., n}`.
//!
//! `∅` and the ground set are forced members. The remaining `2^n - 2` masks
//! are decided in a fixed order (popcount descending, then numeric
//! ascending) by an exclude-first depth-first search. A mask `A` may be
//! included only if `A ∪ B` is already included (or is the ground set) for
//! every included `B`. Two incomparable masks have a union strictly larger
//! than either, so under this order the union has always been decided
//! before `A`, and every leaf is union-closed without a final check.
//!
//! Emission order is the lexicographic order of decision strings with
//! exclude (`0`) before include (`1`).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{for_each_permutation, SetFamily};
use crate::mask::SetMask;

pub const MIN_N: u32 = 1;
/// Largest ground set for exhaustive enumeration.
pub const MAX_N: u32 = 6;
/// Largest ground set for [`naive_enumerate`].
pub const NAIVE_MAX_N: u32 = 4;

/// Tag of the mask processing order; stored in checkpoints.
pub const ORDER_VERSION: &str = "popcount-desc-numeric-asc/1";

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EnumFilter {
    pub t_min: Option<u32>,
    pub t_exact: Option<u32>,
    /// Keep only families equal to their canonical form.
    pub canonical_only: bool,
    pub max_m: Option<usize>,
}

impl EnumFilter {
    pub fn t_exact(k: u32) -> Self {
        EnumFilter {
            t_exact: Some(k),
            ..Default::default()
        }
    }

    pub fn t_min(k: u32) -> Self {
        EnumFilter {
            t_min: Some(k),
            ..Default::default()
        }
    }

    pub fn validate(&self, n: u32) -> Result<()> {
        if self.t_exact.is_some() && self.t_min.is_some() {
            return Err(Error::InvalidFilter("t_exact and t_min are exclusive".into()));
        }
        for t in self.t_exact.iter().chain(self.t_min.iter()) {
            if !(1..=n).contains(t) {
                return Err(Error::InvalidFilter(format!("T bound {t} outside 1..={n}")));
            }
        }
        if self.max_m == Some(0) {
            return Err(Error::InvalidFilter("max_m must be positive".into()));
        }
        Ok(())
    }

    fn t_floor(&self) -> u32 {
        self.t_exact.or(self.t_min).unwrap_or(1)
    }
}

/// Proper nonempty masks of width `n` in decision order.
pub fn decision_order(n: u32) -> Vec<SetMask> {
    let full = SetMask::full(n);
    let mut masks: Vec<SetMask> = (1..full.bits()).map(SetMask).collect();
    masks.sort_by_key(|m| (std::cmp::Reverse(m.len()), m.bits()));
    masks
}

fn check_n(n: u32, max: u32) -> Result<()> {
    if (MIN_N..=max).contains(&n) {
        Ok(())
    } else {
        Err(Error::EnumerationBound { n, min: MIN_N, max })
    }
}

/// A position in the search tree: the include/exclude choices along the path
/// from the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnumCheckpoint {
    pub n: u32,
    pub order_version: String,
    /// `'1'` = include, `'0'` = exclude, one per decided mask.
    pub decisions: String,
}

impl EnumCheckpoint {
    pub fn root(n: u32) -> Self {
        EnumCheckpoint {
            n,
            order_version: ORDER_VERSION.to_string(),
            decisions: String::new(),
        }
    }

    /// Build a checkpoint from explicit choices, rejecting infeasible prefixes.
    pub fn new(n: u32, decisions: &[bool]) -> Result<Self> {
        let cp = EnumCheckpoint {
            n,
            order_version: ORDER_VERSION.to_string(),
            decisions: decisions.iter().map(|&d| if d { '1' } else { '0' }).collect(),
        };
        cp.replay()?;
        Ok(cp)
    }

    /// The fully decided leaf at which `family` is emitted.
    pub fn leaf_of(family: &SetFamily) -> Self {
        EnumCheckpoint {
            n: family.n(),
            order_version: ORDER_VERSION.to_string(),
            decisions: decision_order(family.n())
                .iter()
                .map(|&m| if family.contains(m) { '1' } else { '0' })
                .collect(),
        }
    }

    pub fn depth(&self) -> usize {
        self.decisions.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("checkpoint is always serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    fn choices(&self) -> Result<Vec<bool>> {
        self.decisions
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::CorruptCheckpoint(format!(
                    "unexpected decision character {other:?}"
                ))),
            })
            .collect()
    }

    /// Validate and rebuild the search state at this position.
    fn replay(&self) -> Result<Walker> {
        if self.order_version != ORDER_VERSION {
            return Err(Error::CheckpointVersion {
                found: self.order_version.clone(),
                expected: ORDER_VERSION.to_string(),
            });
        }
        check_n(self.n, MAX_N)?;
        let choices = self.choices()?;
        let mut walker = Walker::new(self.n);
        if choices.len() > walker.order.len() {
            return Err(Error::CorruptCheckpoint(format!(
                "{} decisions for {} masks",
                choices.len(),
                walker.order.len()
            )));
        }
        for (i, &include) in choices.iter().enumerate() {
            if include {
                let a = walker.order[i];
                if !walker.can_include(a) {
                    return Err(Error::InfeasiblePrefix(i));
                }
                walker.include(a);
            }
        }
        walker.depth = choices.len();
        Ok(walker)
    }
}

/// Search state: included masks plus a presence word over all `2^n <= 64` masks.
struct Walker {
    n: u32,
    full: SetMask,
    order: Vec<SetMask>,
    included: Vec<SetMask>,
    present: u64,
    depth: usize,
}

impl Walker {
    fn new(n: u32) -> Self {
        let full = SetMask::full(n);
        Walker {
            n,
            full,
            order: decision_order(n),
            included: Vec::new(),
            present: 1 << full.bits(),
            depth: 0,
        }
    }

    fn can_include(&self, a: SetMask) -> bool {
        self.included
            .iter()
            .all(|&b| self.present >> a.union(b).bits() & 1 == 1)
    }

    fn include(&mut self, a: SetMask) {
        self.included.push(a);
        self.present |= 1 << a.bits();
    }

    fn exclude_last(&mut self) {
        let a = self.included.pop().expect("include/exclude are paired");
        self.present &= !(1 << a.bits());
    }

    fn family(&self) -> SetFamily {
        let mut members = Vec::with_capacity(self.included.len() + 2);
        members.push(SetMask::EMPTY);
        members.extend_from_slice(&self.included);
        members[1..].sort_unstable();
        members.push(self.full);
        SetFamily::from_sorted_unchecked(self.n, members)
    }

    fn t_value(&self) -> u32 {
        self.included.iter().map(|m| m.len()).min().unwrap_or(self.n)
    }
}

struct Run<'a, S> {
    walker: Walker,
    t_floor: u32,
    t_exact: Option<u32>,
    max_extra: usize,
    canon: Option<Canonicalizer>,
    sink: &'a mut S,
    emitted: u64,
}

impl<S: FnMut(&SetFamily)> Run<'_, S> {
    fn dfs(&mut self, idx: usize) {
        if idx == self.walker.order.len() {
            self.leaf();
            return;
        }
        self.dfs(idx + 1);
        let a = self.walker.order[idx];
        if a.len() >= self.t_floor
            && self.walker.included.len() < self.max_extra
            && self.walker.can_include(a)
        {
            self.walker.include(a);
            self.dfs(idx + 1);
            self.walker.exclude_last();
        }
    }

    fn leaf(&mut self) {
        if let Some(t) = self.t_exact {
            if self.walker.t_value() != t {
                return;
            }
        }
        let family = self.walker.family();
        if let Some(canon) = &self.canon {
            if !canon.is_canonical(&family) {
                return;
            }
        }
        (self.sink)(&family);
        self.emitted += 1;
    }
}

/// Emit every union-closed family over `{1, ..., n}` containing `∅` and the
/// ground set that passes `filter`, in deterministic order. Returns the number
/// emitted.
pub fn enumerate_union_closed<S: FnMut(&SetFamily)>(
    n: u32,
    filter: &EnumFilter,
    sink: S,
) -> Result<u64> {
    check_n(n, MAX_N)?;
    resume(&EnumCheckpoint::root(n), filter, sink)
}

/// Emit exactly the families in the subtree below `checkpoint`.
pub fn resume<S: FnMut(&SetFamily)>(
    checkpoint: &EnumCheckpoint,
    filter: &EnumFilter,
    mut sink: S,
) -> Result<u64> {
    let walker = checkpoint.replay()?;
    filter.validate(walker.n)?;
    let t_floor = filter.t_floor();
    let max_extra = filter.max_m.map_or(usize::MAX, |m| m.saturating_sub(2));
    if walker.included.iter().any(|m| m.len() < t_floor) || walker.included.len() > max_extra {
        return Ok(0);
    }
    let canon = if filter.canonical_only {
        Some(Canonicalizer::new(walker.n))
    } else {
        None
    };
    let start = walker.depth;
    let mut run = Run {
        walker,
        t_floor,
        t_exact: filter.t_exact,
        max_extra,
        canon,
        sink: &mut sink,
        emitted: 0,
    };
    run.dfs(start);
    Ok(run.emitted)
}

/// Feasible decision prefixes of length `depth` (or shorter only when the
/// tree is shallower), in emission order. Their subtrees partition the full
/// enumeration.
pub fn partition_tasks(n: u32, depth: usize) -> Result<Vec<EnumCheckpoint>> {
    check_n(n, MAX_N)?;
    let mut walker = Walker::new(n);
    if depth > walker.order.len() {
        return Err(Error::PartitionDepth {
            depth,
            max: walker.order.len(),
        });
    }
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(depth);
    fn go(w: &mut Walker, path: &mut Vec<bool>, depth: usize, out: &mut Vec<EnumCheckpoint>) {
        if path.len() == depth {
            out.push(EnumCheckpoint {
                n: w.n,
                order_version: ORDER_VERSION.to_string(),
                decisions: path.iter().map(|&d| if d { '1' } else { '0' }).collect(),
            });
            return;
        }
        let a = w.order[path.len()];
        path.push(false);
        go(w, path, depth, out);
        path.pop();
        if w.can_include(a) {
            w.include(a);
            path.push(true);
            go(w, path, depth, out);
            path.pop();
            w.exclude_last();
        }
    }
    go(&mut walker, &mut path, depth, &mut out);
    Ok(out)
}

/// Run `task` on every partition subtree using `threads` workers and return
/// the results in partition order.
pub fn map_partitions<R, F>(n: u32, depth: usize, threads: usize, task: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(&EnumCheckpoint) -> Result<R> + Sync,
{
    let tasks = partition_tasks(n, depth)?;
    if threads <= 1 {
        return tasks.iter().map(&task).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidSearch(format!("thread pool: {e}")))?;
    pool.install(|| tasks.par_iter().map(&task).collect())
}

/// Partition depth giving a few hundred tasks at most.
pub fn default_partition_depth(n: u32) -> usize {
    let masks = (1usize << n) - 2;
    masks.min(10)
}

/// Brute-force oracle: test every subset of the proper nonempty masks.
pub fn naive_enumerate(n: u32) -> Result<Vec<SetFamily>> {
    check_n(n, NAIVE_MAX_N)?;
    let order = decision_order(n);
    let k = order.len();
    let full = SetMask::full(n);
    let mut out = Vec::new();
    // Counting up with order[0] as the most significant bit visits choice
    // strings in lexicographic order.
    for x in 0u64..1 << k {
        let mut members = vec![SetMask::EMPTY, full];
        for (i, &m) in order.iter().enumerate() {
            if x >> (k - 1 - i) & 1 == 1 {
                members.push(m);
            }
        }
        let f = SetFamily::new(n, members)?;
        if f.is_union_closed() && f.universe() == full {
            out.push(f);
        }
    }
    Ok(out)
}

/// Canonicity test with precomputed relabeling tables, for `n <= 6`.
struct Canonicalizer {
    tables: Vec<Vec<SetMask>>,
}

impl Canonicalizer {
    fn new(n: u32) -> Self {
        let mut tables = Vec::new();
        for_each_permutation(n, |images| {
            tables.push((0..1u32 << n).map(|b| SetMask(b as u16).map(images)).collect());
        });
        Canonicalizer { tables }
    }

    fn is_canonical(&self, f: &SetFamily) -> bool {
        let mut scratch = Vec::with_capacity(f.m());
        self.tables.iter().all(|table| {
            scratch.clear();
            scratch.extend(f.members().iter().map(|m| table[m.index()]));
            scratch.sort_unstable();
            scratch.as_slice() >= f.members()
        })
    }
}

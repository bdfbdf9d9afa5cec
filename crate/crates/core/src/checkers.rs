//! Conjecture predicates over union-closed families.
//!
//! All checks require a union-closed family that contains the empty set and
//! at least one nonempty member; violations come back as `Err`, never as a
//! failing verdict.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{AbundanceRule, SetFamily};
use crate::mask::{ElementId, SetMask};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conjecture {
    /// Some element lies in at least half of the members.
    Frankl,
    /// With `T(F) = k >= 2`, at least `k` abundant elements.
    S1,
    /// With `T(F) >= 2`, at least two abundant elements.
    S2,
}

impl Conjecture {
    pub const ALL: [Conjecture; 3] = [Conjecture::Frankl, Conjecture::S1, Conjecture::S2];

    pub fn name(self) -> &'static str {
        match self {
            Conjecture::Frankl => "frankl",
            Conjecture::S1 => "s1",
            Conjecture::S2 => "s2",
        }
    }
}

impl fmt::Display for Conjecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Conjecture {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "frankl" => Ok(Conjecture::Frankl),
            "s1" => Ok(Conjecture::S1),
            "s2" => Ok(Conjecture::S2),
            other => Err(format!("unknown conjecture {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Fails,
    NotApplicable,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::NotApplicable => "not_applicable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Every witness is abundant; the list is ascending and nonempty.
    Holds { witnesses: Vec<ElementId> },
    /// `achieved < required` abundant elements.
    Fails { required: u32, achieved: u32 },
    NotApplicable { reason: String },
}

impl Verdict {
    pub fn status(&self) -> Status {
        match self {
            Verdict::Holds { .. } => Status::Holds,
            Verdict::Fails { .. } => Status::Fails,
            Verdict::NotApplicable { .. } => Status::NotApplicable,
        }
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fails { .. })
    }

    pub fn witnesses(&self) -> &[ElementId] {
        match self {
            Verdict::Holds { witnesses } => witnesses,
            _ => &[],
        }
    }

    /// Holds when at least `required` abundant elements exist.
    pub(crate) fn from_count(abundant: Vec<ElementId>, required: u32) -> Verdict {
        if abundant.len() as u32 >= required && !abundant.is_empty() {
            Verdict::Holds {
                witnesses: abundant,
            }
        } else {
            Verdict::Fails {
                required,
                achieved: abundant.len() as u32,
            }
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds { witnesses } => {
                let w: Vec<String> = witnesses.iter().map(|e| e.to_string()).collect();
                write!(f, "holds (witnesses {{{}}})", w.join(","))
            }
            Verdict::Fails { required, achieved } => {
                write!(f, "fails (required {required}, achieved {achieved})")
            }
            Verdict::NotApplicable { reason } => write!(f, "not applicable ({reason})"),
        }
    }
}

/// Flat JSON form of a verdict; absent fields are omitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub conjecture: Option<Conjecture>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t_value: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witnesses: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub required: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub achieved: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
}

impl From<&Verdict> for VerdictJson {
    fn from(v: &Verdict) -> Self {
        let mut j = VerdictJson {
            conjecture: None,
            status: v.status(),
            t_value: None,
            m: None,
            n: None,
            witnesses: None,
            required: None,
            achieved: None,
            reason: None,
        };
        match v {
            Verdict::Holds { witnesses } => {
                j.witnesses = Some(witnesses.iter().map(|e| e.get()).collect())
            }
            Verdict::Fails { required, achieved } => {
                j.required = Some(*required);
                j.achieved = Some(*achieved);
            }
            Verdict::NotApplicable { reason } => j.reason = Some(reason.clone()),
        }
        j
    }
}

impl TryFrom<VerdictJson> for Verdict {
    type Error = Error;

    fn try_from(j: VerdictJson) -> Result<Self> {
        let missing = |field: &str| Error::Json(format!("verdict missing {field}"));
        Ok(match j.status {
            Status::Holds => Verdict::Holds {
                witnesses: j
                    .witnesses
                    .ok_or_else(|| missing("witnesses"))?
                    .into_iter()
                    .map(|v| ElementId::new(v).ok_or_else(|| missing("valid witness")))
                    .collect::<Result<_>>()?,
            },
            Status::Fails => Verdict::Fails {
                required: j.required.ok_or_else(|| missing("required"))?,
                achieved: j.achieved.ok_or_else(|| missing("achieved"))?,
            },
            Status::NotApplicable => Verdict::NotApplicable {
                reason: j.reason.ok_or_else(|| missing("reason"))?,
            },
        })
    }
}

/// Verdict report for one conjecture on one family.
pub fn verdict_report(f: &SetFamily, conjecture: Conjecture, verdict: &Verdict) -> VerdictJson {
    VerdictJson {
        conjecture: Some(conjecture),
        t_value: f.t_value().ok(),
        m: Some(f.m()),
        n: Some(f.n()),
        ..VerdictJson::from(verdict)
    }
}

/// Checks the standing assumptions shared by every conjecture check.
pub fn validate(f: &SetFamily) -> Result<()> {
    if let Some((a, b)) = f.union_violation() {
        return Err(Error::NotUnionClosed {
            a,
            b,
            union: a.union(b),
        });
    }
    if !f.contains_empty() {
        return Err(Error::MissingEmptySet);
    }
    f.t_value()?;
    Ok(())
}

pub fn check(f: &SetFamily, conjecture: Conjecture) -> Result<Verdict> {
    check_with_rule(f, conjecture, AbundanceRule::default())
}

pub fn check_with_rule(f: &SetFamily, conjecture: Conjecture, rule: AbundanceRule) -> Result<Verdict> {
    validate(f)?;
    Ok(verdict_unchecked(f, conjecture, rule))
}

/// Skips [`validate`]; callers guarantee the preconditions.
pub(crate) fn verdict_unchecked(f: &SetFamily, conjecture: Conjecture, rule: AbundanceRule) -> Verdict {
    let abundant = f.abundant_elements_with(rule);
    let t = f.t_value().expect("validated family has a nonempty member");
    match conjecture {
        Conjecture::Frankl => Verdict::from_count(abundant, 1),
        Conjecture::S1 | Conjecture::S2 => {
            if let Some(reason) = scope_exclusion(f.n(), t) {
                return Verdict::NotApplicable { reason };
            }
            let required = if conjecture == Conjecture::S1 { t } else { 2 };
            Verdict::from_count(abundant, required)
        }
    }
}

/// Why S1/S2 do not apply, if they don't.
fn scope_exclusion(n: u32, t: u32) -> Option<String> {
    if n < 2 {
        Some("n=1: conjecture requires n >= 2".to_string())
    } else if t == 1 {
        Some("T(F)=1: conjecture requires T(F) >= 2".to_string())
    } else {
        None
    }
}

pub fn check_frankl(f: &SetFamily) -> Result<Verdict> {
    check(f, Conjecture::Frankl)
}

pub fn check_s1(f: &SetFamily) -> Result<Verdict> {
    check(f, Conjecture::S1)
}

pub fn check_s2(f: &SetFamily) -> Result<Verdict> {
    check(f, Conjecture::S2)
}

/// When `T(F) = 2`, the first pair (in storage order) of disjoint two-element
/// members. Such a pair forces two abundant elements in a union-closed family.
pub fn disjoint_pair_witness(f: &SetFamily) -> Option<(SetMask, SetMask)> {
    if f.t_value().ok()? != 2 {
        return None;
    }
    let pairs: Vec<SetMask> = f.members().iter().copied().filter(|m| m.len() == 2).collect();
    let found = pairs.iter().enumerate().find_map(|(i, &a)| {
        pairs[i + 1..]
            .iter()
            .find(|&&b| a.is_disjoint(b))
            .map(|&b| (a, b))
    });
    if found.is_some() && f.is_union_closed() {
        debug_assert!(f.abundant_elements().len() >= 2);
    }
    found
}

/// Mean-frequency argument over the proper members (neither empty nor the
/// whole ground set).
///
/// With `S` the total size of the proper members and `c` their number, some
/// element lies in at least `ceil(S / n)` proper members. When twice that is
/// at least `c`, the most frequent element (smallest id on ties) is abundant in
/// the whole family, since `∅` and the ground set add one member each and the
/// ground set adds one occurrence. Returns `None` when the bound is too weak,
/// which says nothing about the conjecture itself.
pub fn averaging_argument(f: &SetFamily) -> Result<Option<ElementId>> {
    validate(f)?;
    let full = SetMask::full(f.n());
    let universe = f.universe();
    if universe != full {
        return Err(Error::UniverseMismatch { universe, n: f.n() });
    }
    let n = f.n() as usize;
    let mut freq = vec![0u32; n];
    let (mut total, mut proper) = (0u64, 0u64);
    for &a in f.members() {
        if a.is_empty() || a == full {
            continue;
        }
        proper += 1;
        total += a.len() as u64;
        for e in a.elements() {
            freq[e.bit() as usize] += 1;
        }
    }
    if proper == 0 {
        return Ok(Some(ElementId(1)));
    }
    if 2 * total.div_ceil(n as u64) < proper {
        return Ok(None);
    }
    let best = (0..n).fold(0, |best, i| if freq[i] > freq[best] { i } else { best });
    let element = ElementId(best as u8 + 1);
    debug_assert!(f.abundant_elements().contains(&element));
    Ok(Some(element))
}

/// Applicability and outcome of the three open questions for one family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct QuestionReport {
    /// `T(F) = 3`; claim: three abundant elements.
    pub q1_applicable: bool,
    pub q1_holds: bool,
    /// `T(F) = 2`; claim: two abundant elements.
    pub q2_applicable: bool,
    pub q2_holds: bool,
    /// `2 T(F) > n`; claim: `T(F)` abundant elements.
    pub q3_applicable: bool,
    pub q3_holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Question {
    Q1,
    Q2,
    Q3,
}

impl Question {
    pub const ALL: [Question; 3] = [Question::Q1, Question::Q2, Question::Q3];

    /// Number of abundant elements the question asks for, when it applies.
    pub fn claim(self, n: u32, t: u32) -> Option<u32> {
        match self {
            Question::Q1 => (t == 3).then_some(3),
            Question::Q2 => (t == 2).then_some(2),
            Question::Q3 => (2 * t > n).then_some(t),
        }
    }
}

pub fn evaluate_questions(f: &SetFamily) -> Result<QuestionReport> {
    validate(f)?;
    let t = f.t_value()?;
    if t < 2 {
        return Err(Error::TValueTooSmall { t, min: 2 });
    }
    let abundant = f.abundant_elements().len() as u32;
    let outcome = |q: Question| match q.claim(f.n(), t) {
        Some(required) => (true, abundant >= required),
        None => (false, false),
    };
    let (q1_applicable, q1_holds) = outcome(Question::Q1);
    let (q2_applicable, q2_holds) = outcome(Question::Q2);
    let (q3_applicable, q3_holds) = outcome(Question::Q3);
    Ok(QuestionReport {
        q1_applicable,
        q1_holds,
        q2_applicable,
        q2_holds,
        q3_applicable,
        q3_holds,
    })
}

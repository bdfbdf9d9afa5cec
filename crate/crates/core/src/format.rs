//! Text and JSON encodings of families.
//!
//! Text format: one member per line, either `{}` or comma-separated ascending
//! elements such as `1,2,7,8`. Lines starting with `#` and blank lines are
//! skipped. An optional leading `n=<int>` line pins the ground-set size;
//! otherwise it is the largest element seen.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::mask::{SetMask, MAX_N};

pub fn parse_family(text: &str) -> Result<SetFamily> {
    let mut declared_n: Option<u32> = None;
    let mut members: Vec<(usize, Vec<u32>)> = Vec::new();
    let mut seen_content = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        if let Some(rest) = line.strip_prefix("n=") {
            if seen_content {
                return Err(err("`n=` header must come before any member".into()));
            }
            let n: u32 = rest
                .trim()
                .parse()
                .map_err(|_| err(format!("invalid ground-set size {rest:?}")))?;
            if !(1..=MAX_N).contains(&n) {
                return Err(Error::GroundSizeOutOfRange(n));
            }
            declared_n = Some(n);
            seen_content = true;
            continue;
        }
        seen_content = true;
        if line == "{}" {
            members.push((line_no, Vec::new()));
            continue;
        }
        let mut elements = Vec::new();
        for tok in line.split(',') {
            let tok = tok.trim();
            let e: u32 = tok
                .parse()
                .map_err(|_| err(format!("invalid element {tok:?}")))?;
            if elements.last().is_some_and(|&prev| prev >= e) {
                return Err(err("elements must be strictly ascending".into()));
            }
            elements.push(e);
        }
        members.push((line_no, elements));
    }

    if members.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let limit = declared_n.unwrap_or(MAX_N);
    for (_, elements) in &members {
        if let Some(&e) = elements.iter().find(|&&e| e == 0 || e > limit) {
            return Err(Error::ElementOutOfRange { element: e, n: limit });
        }
    }
    let n = declared_n.unwrap_or_else(|| {
        members
            .iter()
            .flat_map(|(_, e)| e.iter().copied())
            .max()
            .unwrap_or(1)
    });
    SetFamily::new(
        n,
        members
            .into_iter()
            .map(|(_, e)| SetMask::from_elements(e)),
    )
}

/// `{"n": <int>, "sets": [[<ints>...], ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub n: u32,
    pub sets: Vec<Vec<u32>>,
}

impl From<&SetFamily> for FamilyJson {
    fn from(f: &SetFamily) -> Self {
        FamilyJson {
            n: f.n(),
            sets: f
                .members()
                .iter()
                .map(|m| m.elements().map(|e| e.get()).collect())
                .collect(),
        }
    }
}

impl TryFrom<FamilyJson> for SetFamily {
    type Error = Error;

    fn try_from(j: FamilyJson) -> Result<Self> {
        if !(1..=MAX_N).contains(&j.n) {
            return Err(Error::GroundSizeOutOfRange(j.n));
        }
        let mut masks = Vec::with_capacity(j.sets.len());
        for set in &j.sets {
            if let Some(&e) = set.iter().find(|&&e| e == 0 || e > j.n) {
                return Err(Error::ElementOutOfRange { element: e, n: j.n });
            }
            masks.push(SetMask::from_elements(set.iter().copied()));
        }
        SetFamily::new(j.n, masks)
    }
}

pub fn family_to_json(f: &SetFamily) -> serde_json::Value {
    serde_json::to_value(FamilyJson::from(f)).expect("family json is always serializable")
}

pub fn family_from_json(text: &str) -> Result<SetFamily> {
    let j: FamilyJson = serde_json::from_str(text)?;
    SetFamily::try_from(j)
}

/// Text or JSON, decided by the first non-whitespace character.
pub fn parse_any(text: &str) -> Result<SetFamily> {
    if text.trim_start().starts_with('{') && !text.trim_start().starts_with("{}") {
        family_from_json(text)
    } else {
        parse_family(text)
    }
}

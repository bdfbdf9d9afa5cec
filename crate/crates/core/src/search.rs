//! Counterexample search: the n = 9 fixture, exhaustive scans over the
//! enumeration, seeded random closure sampling and block-structured templates.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::checkers::{self, Conjecture, Question, Verdict, VerdictJson};
use crate::enumeration::{self, EnumCheckpoint, EnumFilter};
use crate::error::{Error, Result};
use crate::family::{AbundanceRule, SetFamily};
use crate::format::FamilyJson;
use crate::mask::{ElementId, SetMask, MAX_N};

/// Default cap on findings kept per run.
pub const DEFAULT_MAX_FINDINGS: usize = 100;

/// The union-closed family over `{1, ..., 9}` with `T(F) = 4` and only three
/// abundant elements.
pub fn paper_example() -> SetFamily {
    SetFamily::from_sets(
        9,
        &[
            &[],
            &[1, 2, 7, 8],
            &[3, 4, 7, 9],
            &[5, 6, 8, 9],
            &[1, 2, 7, 8, 9],
            &[3, 4, 7, 8, 9],
            &[5, 6, 7, 8, 9],
            &[1, 2, 3, 4, 7, 8, 9],
            &[1, 2, 5, 6, 7, 8, 9],
            &[3, 4, 5, 6, 7, 8, 9],
            &[1, 2, 3, 4, 5, 6, 7, 8, 9],
        ],
    )
    .expect("fixture is well formed")
}

/// One expected-vs-actual line of the fixture report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureCheck {
    pub name: &'static str,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureReport {
    pub family: FamilyJson,
    pub checks: Vec<FixtureCheck>,
    pub passed: bool,
}

fn element_list(ids: &[ElementId]) -> String {
    let parts: Vec<String> = ids.iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn verdict_or_error(r: Result<Verdict>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

/// Recompute every published property of [`paper_example`].
pub fn verify_paper_example() -> FixtureReport {
    let f = paper_example();
    let mut checks = Vec::new();
    let mut push = |name, expected: String, actual: String| {
        let pass = expected == actual;
        checks.push(FixtureCheck {
            name,
            expected,
            actual,
            pass,
        });
    };
    push("union_closed", "true".into(), f.is_union_closed().to_string());
    push("m", "11".into(), f.m().to_string());
    push("n", "9".into(), f.n().to_string());
    push(
        "t_value",
        "4".into(),
        f.t_value().map_or_else(|e| e.to_string(), |t| t.to_string()),
    );
    push(
        "frequencies",
        "[5, 5, 5, 5, 5, 5, 9, 9, 9]".into(),
        format!("{:?}", f.frequency_profile().counts),
    );
    push(
        "abundant",
        "{7,8,9}".into(),
        element_list(&f.abundant_elements()),
    );
    push(
        "s1",
        Verdict::Fails {
            required: 4,
            achieved: 3,
        }
        .to_string(),
        verdict_or_error(checkers::check_s1(&f)),
    );
    let expected_holds = Verdict::Holds {
        witnesses: [7, 8, 9].map(ElementId).to_vec(),
    }
    .to_string();
    push("s2", expected_holds.clone(), verdict_or_error(checkers::check_s2(&f)));
    push("frankl", expected_holds, verdict_or_error(checkers::check_frankl(&f)));
    let passed = checks.iter().all(|c| c.pass);
    FixtureReport {
        family: FamilyJson::from(&f),
        checks,
        passed,
    }
}

/// The claim a search tries to break.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SearchTarget {
    #[serde(rename = "frankl-fail")]
    FranklFail,
    #[serde(rename = "s1-fail")]
    S1Fail,
    #[serde(rename = "s2-fail")]
    S2Fail,
    #[serde(rename = "q1")]
    Q1Fail,
    #[serde(rename = "q2")]
    Q2Fail,
    #[serde(rename = "q3")]
    Q3Fail,
}

impl SearchTarget {
    pub const ALL: [SearchTarget; 6] = [
        SearchTarget::FranklFail,
        SearchTarget::S1Fail,
        SearchTarget::S2Fail,
        SearchTarget::Q1Fail,
        SearchTarget::Q2Fail,
        SearchTarget::Q3Fail,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SearchTarget::FranklFail => "frankl-fail",
            SearchTarget::S1Fail => "s1-fail",
            SearchTarget::S2Fail => "s2-fail",
            SearchTarget::Q1Fail => "q1",
            SearchTarget::Q2Fail => "q2",
            SearchTarget::Q3Fail => "q3",
        }
    }

    fn question(self) -> Option<Question> {
        match self {
            SearchTarget::Q1Fail => Some(Question::Q1),
            SearchTarget::Q2Fail => Some(Question::Q2),
            SearchTarget::Q3Fail => Some(Question::Q3),
            _ => None,
        }
    }

    /// Whether a family with ground size `n` and `T(F) = t` is an instance.
    pub fn applies(self, n: u32, t: u32) -> bool {
        match self {
            SearchTarget::FranklFail => true,
            SearchTarget::S1Fail | SearchTarget::S2Fail => n >= 2 && t >= 2,
            SearchTarget::Q1Fail | SearchTarget::Q2Fail | SearchTarget::Q3Fail => {
                t >= 2 && self.question().and_then(|q| q.claim(n, t)).is_some()
            }
        }
    }

    /// Smallest `T(F)` any instance over `{1, ..., n}` can have, or `None` when
    /// no instance exists.
    pub fn t_floor(self, n: u32) -> Option<u32> {
        (1..=n).find(|&t| self.applies(n, t))
    }

    /// The verdict this target inspects; a `Fails` verdict is a finding.
    pub fn evaluate(self, f: &SetFamily) -> Result<Verdict> {
        self.evaluate_with(f, AbundanceRule::default())
    }

    pub fn evaluate_with(self, f: &SetFamily, rule: AbundanceRule) -> Result<Verdict> {
        checkers::validate(f)?;
        Ok(self.evaluate_unchecked(f, rule))
    }

    fn evaluate_unchecked(self, f: &SetFamily, rule: AbundanceRule) -> Verdict {
        let conjecture = match self {
            SearchTarget::FranklFail => Some(Conjecture::Frankl),
            SearchTarget::S1Fail => Some(Conjecture::S1),
            SearchTarget::S2Fail => Some(Conjecture::S2),
            _ => None,
        };
        if let Some(c) = conjecture {
            return checkers::verdict_unchecked(f, c, rule);
        }
        let t = f.t_value().expect("validated family has a nonempty member");
        if !self.applies(f.n(), t) {
            return Verdict::NotApplicable {
                reason: format!("T(F)={t} outside the scope of {}", self.name()),
            };
        }
        let required = self
            .question()
            .and_then(|q| q.claim(f.n(), t))
            .expect("applicable question has a claim");
        Verdict::from_count(f.abundant_elements_with(rule), required)
    }
}

impl fmt::Display for SearchTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SearchTarget {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        SearchTarget::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown search target {s:?}"))
    }
}

/// Where a finding came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Exhaustive { checkpoint: EnumCheckpoint },
    Random { seed: u64, iteration: u64 },
    Template(TemplateShape),
    Fixture,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub family: SetFamily,
    pub target: SearchTarget,
    pub verdict: Verdict,
    pub provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct FindingJson {
    target: SearchTarget,
    family: FamilyJson,
    verdict: VerdictJson,
    provenance: Provenance,
}

impl Finding {
    /// Re-run the target's checker and compare with the stored verdict.
    pub fn certify(&self) -> bool {
        self.target
            .evaluate(&self.family)
            .is_ok_and(|v| v == self.verdict && v.is_fail())
    }

    /// One JSON-lines record.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&FindingJson {
            target: self.target,
            family: FamilyJson::from(&self.family),
            verdict: VerdictJson::from(&self.verdict),
            provenance: self.provenance.clone(),
        })
        .expect("finding is always serializable")
    }

    pub fn from_json_line(line: &str) -> Result<Self> {
        let j: FindingJson = serde_json::from_str(line)?;
        Ok(Finding {
            family: SetFamily::try_from(j.family)?,
            target: j.target,
            verdict: Verdict::try_from(j.verdict)?,
            provenance: j.provenance,
        })
    }
}

/// Findings of one run, capped; `suppressed` counts the ones dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchOutcome {
    pub findings: Vec<Finding>,
    pub suppressed: u64,
    /// Families the targets were evaluated on.
    pub examined: u64,
}

impl SearchOutcome {
    fn push(&mut self, finding: Finding, cap: usize) {
        if self.findings.len() < cap {
            self.findings.push(finding);
        } else {
            self.suppressed += 1;
        }
    }

    fn merge(&mut self, other: SearchOutcome, cap: usize) {
        self.examined += other.examined;
        self.suppressed += other.suppressed;
        for f in other.findings {
            self.push(f, cap);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    pub threads: usize,
    pub max_findings: usize,
    pub rule: AbundanceRule,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            threads: 1,
            max_findings: DEFAULT_MAX_FINDINGS,
            rule: AbundanceRule::default(),
        }
    }
}

/// Every enumerated family over `{1, ..., n}` that breaks one of `targets`.
pub fn exhaustive_scan(n: u32, targets: &[SearchTarget]) -> Result<SearchOutcome> {
    exhaustive_scan_with(n, targets, &ScanOptions::default())
}

pub fn exhaustive_scan_with(
    n: u32,
    targets: &[SearchTarget],
    opts: &ScanOptions,
) -> Result<SearchOutcome> {
    if !(enumeration::MIN_N..=enumeration::MAX_N).contains(&n) {
        return Err(Error::EnumerationBound {
            n,
            min: enumeration::MIN_N,
            max: enumeration::MAX_N,
        });
    }
    let live: Vec<SearchTarget> = targets
        .iter()
        .copied()
        .filter(|t| t.t_floor(n).is_some())
        .collect();
    let Some(floor) = live.iter().filter_map(|t| t.t_floor(n)).min() else {
        return Ok(SearchOutcome::default());
    };
    let filter = EnumFilter::t_min(floor);
    let cap = opts.max_findings;
    let parts = enumeration::map_partitions(
        n,
        enumeration::default_partition_depth(n),
        opts.threads,
        |task| {
            let mut out = SearchOutcome::default();
            enumeration::resume(task, &filter, |f| {
                out.examined += 1;
                let t = f.t_value().expect("enumerated families contain the ground set");
                for &target in &live {
                    if !target.applies(n, t) {
                        continue;
                    }
                    let verdict = target.evaluate_unchecked(f, opts.rule);
                    if verdict.is_fail() {
                        out.push(
                            Finding {
                                family: f.clone(),
                                target,
                                verdict,
                                provenance: Provenance::Exhaustive {
                                    checkpoint: EnumCheckpoint::leaf_of(f),
                                },
                            },
                            cap,
                        );
                    }
                }
            })?;
            Ok(out)
        },
    )?;
    let mut total = SearchOutcome::default();
    for part in parts {
        total.merge(part, cap);
    }
    Ok(total)
}

/// Parameters of a seeded random closure search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomSearch {
    pub n: u32,
    pub target: SearchTarget,
    pub seed: u64,
    pub iterations: u64,
    /// Inclusive range for the number of generators drawn per iteration.
    pub gen_count: (usize, usize),
    /// Inclusive range for generator cardinalities (ignored with a pool).
    pub gen_size: (u32, u32),
    /// Draw distinct generators from this list instead of random masks.
    pub pool: Option<Vec<SetMask>>,
    pub max_findings: usize,
    pub threads: usize,
}

impl RandomSearch {
    pub fn new(n: u32, target: SearchTarget, seed: u64, iterations: u64) -> Self {
        RandomSearch {
            n,
            target,
            seed,
            iterations,
            gen_count: (1, (n as usize).clamp(1, 6)),
            gen_size: (1, n),
            pool: None,
            max_findings: DEFAULT_MAX_FINDINGS,
            threads: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSearch(msg));
        if !(1..=MAX_N).contains(&self.n) {
            return bad(format!("n = {} outside 1..={MAX_N}", self.n));
        }
        let (cmin, cmax) = self.gen_count;
        if cmin == 0 || cmin > cmax {
            return bad(format!("generator count range {cmin}..={cmax} is empty or starts at 0"));
        }
        match &self.pool {
            Some(pool) => {
                if pool.is_empty() {
                    return bad("generator pool is empty".into());
                }
                if let Some(m) = pool.iter().find(|m| !m.fits(self.n) || m.is_empty()) {
                    return bad(format!("pool member {m} is empty or exceeds n = {}", self.n));
                }
                if cmax > pool.len() {
                    return bad(format!(
                        "cannot draw {cmax} distinct generators from a pool of {}",
                        pool.len()
                    ));
                }
            }
            None => {
                let (smin, smax) = self.gen_size;
                if smin == 0 || smin > smax || smax > self.n {
                    return bad(format!(
                        "generator size range {smin}..={smax} must lie within 1..={}",
                        self.n
                    ));
                }
            }
        }
        Ok(())
    }

    fn rng(&self, iteration: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(iteration);
        rng
    }

    /// Generators drawn at `iteration`; a pure function of the parameters.
    pub fn generators(&self, iteration: u64) -> Vec<SetMask> {
        let mut rng = self.rng(iteration);
        let count = rng.gen_range(self.gen_count.0..=self.gen_count.1);
        match &self.pool {
            Some(pool) => {
                let mut picks = sample(&mut rng, pool.len(), count).into_vec();
                picks.sort_unstable();
                picks.into_iter().map(|i| pool[i]).collect()
            }
            None => (0..count)
                .map(|_| {
                    let size = rng.gen_range(self.gen_size.0..=self.gen_size.1);
                    SetMask::from_elements(
                        sample(&mut rng, self.n as usize, size as usize)
                            .into_iter()
                            .map(|i| i as u32 + 1),
                    )
                })
                .collect(),
        }
    }

    /// Union closure of the drawn generators with `∅` adjoined.
    pub fn instance(&self, iteration: u64) -> SetFamily {
        closure_with_empty(self.n, self.generators(iteration))
    }

    pub fn run(&self) -> Result<SearchOutcome> {
        self.validate()?;
        let full = SetMask::full(self.n);
        let eval = |iteration: u64| -> Option<Option<Finding>> {
            let f = self.instance(iteration);
            if f.universe() != full {
                return None;
            }
            let t = f.t_value().ok()?;
            if !self.target.applies(self.n, t) {
                return None;
            }
            let verdict = self.target.evaluate_unchecked(&f, AbundanceRule::default());
            let finding = verdict.is_fail().then_some(Finding {
                family: f,
                target: self.target,
                verdict,
                provenance: Provenance::Random {
                    seed: self.seed,
                    iteration,
                },
            });
            Some(finding)
        };
        let results: Vec<Option<Option<Finding>>> = if self.threads > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(self.threads)
                .build()
                .map_err(|e| Error::InvalidSearch(format!("thread pool: {e}")))?;
            pool.install(|| (0..self.iterations).into_par_iter().map(eval).collect())
        } else {
            (0..self.iterations).map(eval).collect()
        };
        let mut out = SearchOutcome::default();
        let mut seen = HashSet::new();
        for finding in results.into_iter().flatten() {
            out.examined += 1;
            if let Some(finding) = finding {
                if seen.insert(finding.family.clone()) {
                    out.push(finding, self.max_findings);
                }
            }
        }
        Ok(out)
    }
}

fn closure_with_empty(n: u32, generators: Vec<SetMask>) -> SetFamily {
    let mut members = generators;
    members.push(SetMask::EMPTY);
    SetFamily::new(n, members)
        .expect("generators fit the ground set")
        .union_closure()
}

/// Block-structured generator shape: `blocks` disjoint blocks of
/// `block_size` elements followed by a shared spine of `spine` elements.
/// Block `i` contributes two generators: the block plus the whole spine, and
/// the block plus the spine minus `drop` consecutive spine elements (taken
/// cyclically, starting from the last one and shifting by one per block).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TemplateShape {
    pub blocks: u32,
    pub block_size: u32,
    pub spine: u32,
    pub drop: u32,
}

impl TemplateShape {
    pub fn n(&self) -> u32 {
        self.blocks * self.block_size + self.spine
    }

    pub fn generators(&self) -> Vec<SetMask> {
        let spine_start = self.blocks * self.block_size + 1;
        let spine: Vec<u32> = (0..self.spine).map(|j| spine_start + j).collect();
        let spine_mask = SetMask::from_elements(spine.iter().copied());
        let mut out = Vec::new();
        for i in 0..self.blocks {
            let block = SetMask::from_elements((0..self.block_size).map(|j| i * self.block_size + j + 1));
            let r = self.spine as i64;
            let dropped = SetMask::from_elements((0..self.drop).map(|j| {
                let idx = (r - 1 - i as i64 - j as i64).rem_euclid(r);
                spine[idx as usize]
            }));
            out.push(block.union(SetMask(spine_mask.bits() & !dropped.bits())));
            out.push(block.union(spine_mask));
        }
        out
    }

    pub fn family(&self) -> SetFamily {
        closure_with_empty(self.n(), self.generators())
    }
}

/// Every template shape with `blocks >= 2`, `0 < drop < spine` and
/// `n <= max_n`, in lexicographic order of `(blocks, block_size, spine, drop)`.
pub fn template_shapes(max_n: u32) -> Vec<TemplateShape> {
    let max_n = max_n.min(MAX_N);
    let mut out = Vec::new();
    for blocks in 2..=max_n {
        for block_size in 1..=max_n {
            for spine in 2..=max_n {
                if blocks * block_size + spine > max_n {
                    continue;
                }
                for drop in 1..spine {
                    out.push(TemplateShape {
                        blocks,
                        block_size,
                        spine,
                        drop,
                    });
                }
            }
        }
    }
    out
}

/// Evaluate `target` on every template family up to `max_n`.
pub fn template_search(max_n: u32, target: SearchTarget) -> SearchOutcome {
    let mut out = SearchOutcome::default();
    let mut seen = HashSet::new();
    for shape in template_shapes(max_n) {
        let f = shape.family();
        let Ok(t) = f.t_value() else { continue };
        if !target.applies(f.n(), t) {
            continue;
        }
        out.examined += 1;
        let verdict = target.evaluate_unchecked(&f, AbundanceRule::default());
        if verdict.is_fail() && seen.insert(f.clone()) {
            out.push(
                Finding {
                    family: f,
                    target,
                    verdict,
                    provenance: Provenance::Template(shape),
                },
                DEFAULT_MAX_FINDINGS,
            );
        }
    }
    out
}

/// Instances checked and claims broken for one question.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QuestionTally {
    pub instances: u64,
    pub violations: u64,
    pub first_violation: Option<SetFamily>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QuestionScan {
    pub n: u32,
    pub q1: QuestionTally,
    pub q2: QuestionTally,
    pub q3: QuestionTally,
}

impl QuestionScan {
    pub fn tally(&self, q: Question) -> &QuestionTally {
        match q {
            Question::Q1 => &self.q1,
            Question::Q2 => &self.q2,
            Question::Q3 => &self.q3,
        }
    }

    fn tally_mut(&mut self, q: Question) -> &mut QuestionTally {
        match q {
            Question::Q1 => &mut self.q1,
            Question::Q2 => &mut self.q2,
            Question::Q3 => &mut self.q3,
        }
    }
}

/// Count instances and violations of each question over all families with
/// ground set `{1, ..., n}`.
pub fn question_scan(n: u32) -> Result<QuestionScan> {
    question_scan_with(n, 1)
}

pub fn question_scan_with(n: u32, threads: usize) -> Result<QuestionScan> {
    let mut scan = QuestionScan {
        n,
        ..Default::default()
    };
    if n < 2 {
        // T(F) >= 2 is impossible on a single element; still check the bound.
        enumeration::partition_tasks(n, 0)?;
        return Ok(scan);
    }
    let filter = EnumFilter::t_min(2);
    let parts = enumeration::map_partitions(
        n,
        enumeration::default_partition_depth(n),
        threads,
        |task| {
            let mut part = QuestionScan::default();
            enumeration::resume(task, &filter, |f| {
                let t = f.t_value().expect("ground set is a member");
                let abundant = f.abundant_elements().len() as u32;
                for q in Question::ALL {
                    if let Some(required) = q.claim(n, t) {
                        let tally = part.tally_mut(q);
                        tally.instances += 1;
                        if abundant < required {
                            tally.violations += 1;
                            tally.first_violation.get_or_insert_with(|| f.clone());
                        }
                    }
                }
            })?;
            Ok(part)
        },
    )?;
    for part in parts {
        for q in Question::ALL {
            let src = part.tally(q).clone();
            let dst = scan.tally_mut(q);
            dst.instances += src.instances;
            dst.violations += src.violations;
            if dst.first_violation.is_none() {
                dst.first_violation = src.first_violation;
            }
        }
    }
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_basics() {
        let f = paper_example();
        assert_eq!(f.m(), 11);
        assert_eq!(f.t_value(), Ok(4));
        assert!(f.contains(SetMask::from_elements([1, 2, 7, 8])));
        assert!(f.contains(SetMask::from_elements([5, 6, 8, 9])));
    }

    #[test]
    fn fixture_report_passes() {
        let r = verify_paper_example();
        assert!(r.passed, "{:#?}", r.checks);
        assert_eq!(r.checks.len(), 9);
    }

    #[test]
    fn target_names_round_trip() {
        for t in SearchTarget::ALL {
            assert_eq!(t.name().parse::<SearchTarget>(), Ok(t));
            let j = serde_json::to_string(&t).unwrap();
            assert_eq!(j, format!("\"{}\"", t.name()));
        }
        assert!("q4".parse::<SearchTarget>().is_err());
    }

    #[test]
    fn target_scopes() {
        assert!(SearchTarget::Q1Fail.applies(5, 3));
        assert!(!SearchTarget::Q1Fail.applies(5, 2));
        assert!(SearchTarget::Q3Fail.applies(4, 3));
        assert!(!SearchTarget::Q3Fail.applies(4, 2));
        assert!(!SearchTarget::Q3Fail.applies(1, 1));
        assert_eq!(SearchTarget::Q1Fail.t_floor(2), None);
        assert_eq!(SearchTarget::Q3Fail.t_floor(5), Some(3));
        assert_eq!(SearchTarget::S1Fail.t_floor(1), None);
        assert_eq!(SearchTarget::FranklFail.t_floor(1), Some(1));
    }

    #[test]
    fn fixture_is_an_s1_finding() {
        let f = paper_example();
        let v = SearchTarget::S1Fail.evaluate(&f).unwrap();
        assert_eq!(v, Verdict::Fails { required: 4, achieved: 3 });
        let finding = Finding {
            family: f,
            target: SearchTarget::S1Fail,
            verdict: v,
            provenance: Provenance::Fixture,
        };
        assert!(finding.certify());
        let line = finding.to_json_line();
        assert_eq!(Finding::from_json_line(&line).unwrap(), finding);
    }

    #[test]
    fn small_exhaustive_scans_are_empty() {
        for n in 1..=4 {
            let out = exhaustive_scan(n, &SearchTarget::ALL).unwrap();
            assert!(out.findings.is_empty(), "n={n}: {:?}", out.findings);
        }
    }

    #[test]
    fn random_search_is_deterministic() {
        let mut cfg = RandomSearch::new(7, SearchTarget::S1Fail, 42, 300);
        cfg.gen_size = (2, 5);
        let a = cfg.run().unwrap();
        let b = cfg.run().unwrap();
        assert_eq!(a, b);
        cfg.threads = 4;
        assert_eq!(cfg.run().unwrap(), a);
    }

    #[test]
    fn random_search_pool_recovers_fixture() {
        let gens = paper_example()
            .members()
            .iter()
            .copied()
            .filter(|m| m.len() == 4 || m.len() == 5)
            .collect::<Vec<_>>();
        assert_eq!(gens.len(), 6);
        let mut cfg = RandomSearch::new(9, SearchTarget::S1Fail, 7, 50);
        cfg.pool = Some(gens);
        cfg.gen_count = (6, 6);
        let out = cfg.run().unwrap();
        assert_eq!(out.findings.len(), 1);
        assert_eq!(out.findings[0].family, paper_example());
        assert!(out.findings[0].certify());
    }

    #[test]
    fn random_search_validation() {
        let mut cfg = RandomSearch::new(5, SearchTarget::FranklFail, 1, 10);
        cfg.gen_size = (0, 3);
        assert!(cfg.validate().is_err());
        cfg.gen_size = (2, 6);
        assert!(cfg.validate().is_err());
        cfg.gen_size = (1, 5);
        cfg.gen_count = (3, 2);
        assert!(cfg.validate().is_err());
        cfg.gen_count = (1, 3);
        cfg.pool = Some(vec![SetMask::from_elements([1])]);
        assert!(cfg.validate().is_err());
        cfg.pool = Some(vec![]);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn template_reproduces_fixture() {
        let shape = TemplateShape {
            blocks: 3,
            block_size: 2,
            spine: 3,
            drop: 1,
        };
        assert_eq!(shape.n(), 9);
        assert_eq!(shape.family(), paper_example());
        let out = template_search(9, SearchTarget::S1Fail);
        assert!(out.findings.iter().any(|f| f.family == paper_example()));
        assert!(out.findings.iter().all(Finding::certify));
    }

    #[test]
    fn question_scan_small() {
        let s = question_scan(2).unwrap();
        assert_eq!(s.q2.instances, 1);
        assert_eq!(s.q2.violations, 0);
        let s = question_scan(1).unwrap();
        assert_eq!(s.q3.instances, 0);
        assert!(question_scan(7).is_err());
    }

    #[test]
    fn finding_cap() {
        let mut out = SearchOutcome::default();
        let f = Finding {
            family: paper_example(),
            target: SearchTarget::S1Fail,
            verdict: Verdict::Fails { required: 4, achieved: 3 },
            provenance: Provenance::Fixture,
        };
        for _ in 0..3 {
            out.push(f.clone(), 2);
        }
        assert_eq!(out.findings.len(), 2);
        assert_eq!(out.suppressed, 1);
    }
}

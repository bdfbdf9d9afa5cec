//! Acceptance criteria. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits nonzero if any failed.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ucsc_core::checkers::{self, averaging_argument, disjoint_pair_witness, Conjecture, Status};
use ucsc_core::enumeration::{enumerate_union_closed, naive_enumerate, EnumFilter};
use ucsc_core::search::{
    exhaustive_scan, exhaustive_scan_with, verify_paper_example, RandomSearch, ScanOptions,
    SearchTarget,
};
use ucsc_core::{ElementId, Permutation, SetFamily, SetMask, Verdict};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(started: Instant, budget: Duration, what: &str) -> Result<Duration, String> {
    let spent = started.elapsed();
    ensure(spent < budget, || format!("{what} took {spent:?}, budget {budget:?}"))?;
    Ok(spent)
}

fn all_families(n: u32) -> Vec<SetFamily> {
    let mut out = Vec::new();
    enumerate_union_closed(n, &EnumFilter::default(), |f| out.push(f.clone())).unwrap();
    out
}

fn ac1_fixture() -> Outcome {
    let started = Instant::now();
    let report = verify_paper_example();
    let spent = within(started, Duration::from_secs(1), "fixture verification")?;
    for c in &report.checks {
        ensure(c.pass, || format!("{}: expected {}, got {}", c.name, c.expected, c.actual))?;
    }
    let names: Vec<&str> = report.checks.iter().map(|c| c.name).collect();
    for required in [
        "union_closed", "m", "t_value", "frequencies", "abundant", "s1", "s2", "frankl",
    ] {
        ensure(names.contains(&required), || format!("report lacks {required}"))?;
    }
    // Also assert on the typed values, not only the rendered strings.
    let f = ucsc_core::search::paper_example();
    ensure(f.is_union_closed() && f.m() == 11 && f.t_value() == Ok(4), || "basic stats".into())?;
    ensure(f.frequency_profile().counts == [5, 5, 5, 5, 5, 5, 9, 9, 9], || "frequencies".into())?;
    ensure(
        f.abundant_elements() == [7, 8, 9].map(ElementId),
        || "abundant set".into(),
    )?;
    ensure(
        checkers::check_s1(&f) == Ok(Verdict::Fails { required: 4, achieved: 3 }),
        || "s1 verdict".into(),
    )?;
    ensure(checkers::check_s2(&f).map(|v| v.status()) == Ok(Status::Holds), || "s2".into())?;
    ensure(
        checkers::check_frankl(&f).map(|v| v.status()) == Ok(Status::Holds),
        || "frankl".into(),
    )?;
    Ok(format!("{} checks exact, {spent:?}", report.checks.len()))
}

fn ac2_oracle_equivalence() -> Outcome {
    let started = Instant::now();
    let mut counts = Vec::new();
    for n in 1..=4 {
        let fast = all_families(n);
        let naive = naive_enumerate(n).map_err(|e| e.to_string())?;
        ensure(fast == naive, || format!("n={n}: sequences differ"))?;
        counts.push(fast.len());
    }
    ensure(counts[..3] == [1, 4, 45], || format!("counts {counts:?}"))?;
    let spent = within(started, Duration::from_secs(10), "oracle comparison")?;
    Ok(format!("counts n=1..4 {counts:?}, {spent:?}"))
}

fn ac3_small_s1() -> Outcome {
    let started = Instant::now();
    let mut examined = 0;
    for n in 2..=4 {
        let out = exhaustive_scan(n, &[SearchTarget::S1Fail]).map_err(|e| e.to_string())?;
        ensure(out.findings.is_empty() && out.suppressed == 0, || {
            format!("n={n}: {} S1 failures", out.findings.len())
        })?;
        examined += out.examined;
    }
    let spent = within(started, Duration::from_secs(30), "n<=4 scan")?;
    Ok(format!("{examined} families with T>=2, no S1 failure, {spent:?}"))
}

/// Families over {1..5} with T(F) >= 2, counted by brute force over the full
/// enumeration.
fn count_t_at_least_2(n: u32) -> u64 {
    let mut c = 0;
    enumerate_union_closed(n, &EnumFilter::default(), |f| {
        if f.t_value().unwrap() >= 2 {
            c += 1;
        }
    })
    .unwrap();
    c
}

fn ac4_n5_s1() -> Outcome {
    let total = enumerate_union_closed(5, &EnumFilter::default(), |_| {}).map_err(|e| e.to_string())?;
    ensure(total == 1_373_701, || format!("n=5 enumerates {total} families"))?;
    let expected_examined = count_t_at_least_2(5);

    let started = Instant::now();
    let single = exhaustive_scan(5, &[SearchTarget::S1Fail]).map_err(|e| e.to_string())?;
    let t1 = within(started, Duration::from_secs(600), "single-threaded n=5 scan")?;

    let started = Instant::now();
    let opts = ScanOptions {
        threads: 8,
        ..Default::default()
    };
    let multi = exhaustive_scan_with(5, &[SearchTarget::S1Fail], &opts).map_err(|e| e.to_string())?;
    let t8 = within(started, Duration::from_secs(120), "8-thread n=5 scan")?;

    ensure(single.findings.is_empty(), || format!("{} S1 failures", single.findings.len()))?;
    ensure(single == multi, || "thread counts disagree".into())?;
    ensure(single.examined == expected_examined, || {
        format!("examined {} vs {expected_examined}", single.examined)
    })?;
    let again = enumerate_union_closed(5, &EnumFilter::default(), |_| {}).unwrap();
    ensure(again == total, || "count unstable across runs".into())?;
    Ok(format!(
        "{total} families, {} with T>=2, no S1 failure; 1 thread {t1:?}, 8 threads {t8:?}",
        single.examined
    ))
}

fn ac5_implication_chain() -> Outcome {
    let mut checked = 0u64;
    let mut chain_instances = 0u64;
    for n in 1..=5 {
        let mut bad: Option<String> = None;
        enumerate_union_closed(n, &EnumFilter::default(), |f| {
            if bad.is_some() {
                return;
            }
            checked += 1;
            let frankl = checkers::check_frankl(f).unwrap();
            if frankl.status() != Status::Holds {
                bad = Some(format!("Frankl fails on {f:?}"));
                return;
            }
            let t = f.t_value().unwrap();
            if t >= 2 && n >= 2 {
                chain_instances += 1;
                let s1 = checkers::check_s1(f).unwrap().status();
                let s2 = checkers::check_s2(f).unwrap().status();
                if s1 == Status::Holds && s2 != Status::Holds {
                    bad = Some(format!("chain broken on {f:?}: s1={s1:?} s2={s2:?}"));
                }
            }
        })
        .unwrap();
        if let Some(msg) = bad {
            return Err(msg);
        }
    }
    let findings = (1..=5)
        .map(|n| exhaustive_scan(n, &[SearchTarget::FranklFail]).unwrap().findings.len())
        .sum::<usize>();
    ensure(findings == 0, || format!("{findings} FranklFail findings"))?;
    Ok(format!("{checked} families, {chain_instances} with T>=2, chain and Frankl hold"))
}

fn ac6_disjoint_pairs() -> Outcome {
    let mut instances = 0u64;
    for n in 2..=5 {
        let mut violations = 0u64;
        enumerate_union_closed(n, &EnumFilter::t_exact(2), |f| {
            if disjoint_pair_witness(f).is_some() {
                instances += 1;
                if f.abundant_elements().len() < 2 {
                    violations += 1;
                }
            }
        })
        .unwrap();
        ensure(violations == 0, || format!("n={n}: {violations} violations"))?;
    }
    ensure(instances > 0, || "no instances".into())?;
    Ok(format!("{instances} families with a disjoint pair, all with >=2 abundant"))
}

/// Checks one family against the averaging contract; `Err` describes a violation.
fn averaging_ok(f: &SetFamily) -> Result<bool, String> {
    let got = averaging_argument(f).map_err(|e| format!("{e} on {f:?}"))?;
    if let Some(e) = got {
        if !f.abundant_elements().contains(&e) {
            return Err(format!("element {e} not abundant in {f:?}"));
        }
    }
    let t = f.t_value().unwrap();
    if 2 * t >= f.n() && got.is_none() {
        return Err(format!("no witness although 2T >= n for {f:?}"));
    }
    Ok(got.is_some())
}

fn random_valid_closures(n: u32, seed: u64, wanted: usize, sizes: (u32, u32)) -> Vec<SetFamily> {
    let mut cfg = RandomSearch::new(n, SearchTarget::FranklFail, seed, 0);
    cfg.gen_count = (1, 6);
    cfg.gen_size = sizes;
    let full = SetMask::full(n);
    let mut out = Vec::with_capacity(wanted);
    let mut it = 0;
    while out.len() < wanted {
        let f = cfg.instance(it);
        it += 1;
        if f.universe() == full {
            out.push(f);
        }
    }
    out
}

fn ac7_averaging() -> Outcome {
    let started = Instant::now();
    let mut checked = 0u64;
    let mut witnesses = 0u64;
    for n in 1..=5 {
        let mut err = None;
        enumerate_union_closed(n, &EnumFilter::default(), |f| {
            if err.is_none() {
                checked += 1;
                match averaging_ok(f) {
                    Ok(w) => witnesses += w as u64,
                    Err(e) => err = Some(e),
                }
            }
        })
        .unwrap();
        if let Some(e) = err {
            return Err(e);
        }
    }
    let mut regime = 0u64;
    for n in 6..=9 {
        // Half the draws use large generators so the 2T >= n regime is populated.
        let mut fams = random_valid_closures(n, 0xA7E0 + n as u64, 5_000, (1, n));
        fams.extend(random_valid_closures(n, 0xA7E1 + n as u64, 5_000, (n.div_ceil(2), n)));
        for f in &fams {
            checked += 1;
            witnesses += averaging_ok(f)? as u64;
            if 2 * f.t_value().unwrap() >= n {
                regime += 1;
            }
        }
    }
    ensure(regime > 0, || "random families never reached 2T >= n".into())?;
    let spent = within(started, Duration::from_secs(60), "averaging checks")?;
    Ok(format!(
        "{checked} families, {witnesses} witnesses all abundant, {regime} random in 2T>=n regime covered, {spent:?}"
    ))
}

fn ac8_closure() -> Outcome {
    let started = Instant::now();
    let mut checked = 0;
    for n in 3..=8 {
        let mut cfg = RandomSearch::new(n, SearchTarget::FranklFail, 0xC105 + n as u64, 0);
        cfg.gen_count = (1, 8);
        cfg.gen_size = (1, n);
        for it in 0..1_000 {
            let gens = cfg.generators(it);
            let g = SetFamily::new(n, gens.clone()).unwrap();
            let c = g.union_closure();
            ensure(c.union_closure() == c, || format!("not idempotent on {g:?}"))?;
            ensure(c.is_union_closed(), || format!("closure of {g:?} not union-closed"))?;
            ensure(gens.iter().all(|&x| c.contains(x)), || format!("closure of {g:?} drops a generator"))?;
            for &x in c.members() {
                let reach = gens
                    .iter()
                    .filter(|gm| gm.is_subset(x))
                    .fold(SetMask::EMPTY, |a, &b| a.union(b));
                ensure(reach == x, || format!("{x} is not a union of generators of {g:?}"))?;
            }
            checked += 1;
        }
    }
    let spent = within(started, Duration::from_secs(30), "closure checks")?;
    Ok(format!("{checked} generator families, {spent:?}"))
}

fn ac9_permutations() -> Outcome {
    let mut checked = 0;
    for n in 3..=6 {
        let fams = random_valid_closures(n, 0x9E27 + n as u64, 500, (1, n));
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED + n as u64);
        for f in &fams {
            let mut images: Vec<u32> = (1..=n).collect();
            images.shuffle(&mut rng);
            let p = Permutation::new(images).unwrap();
            let g = f.permute(&p).map_err(|e| e.to_string())?;
            ensure(g.m() == f.m(), || "m changed".into())?;
            ensure(g.t_value() == f.t_value(), || "T changed".into())?;
            ensure(g.size_profile() == f.size_profile(), || "size profile changed".into())?;
            ensure(g.is_union_closed() == f.is_union_closed(), || "closedness changed".into())?;
            let (ff, gf) = (f.frequency_profile(), g.frequency_profile());
            for i in 1..=n {
                let e = ElementId::new(i).unwrap();
                ensure(gf.get(p.apply(e)) == ff.get(e), || format!("frequency of {e} not mapped"))?;
            }
            for c in Conjecture::ALL {
                let (vf, vg) = (checkers::check(f, c).unwrap(), checkers::check(&g, c).unwrap());
                ensure(vf.status() == vg.status(), || format!("{c} status changed on {f:?}"))?;
                let mut mapped: Vec<ElementId> = vf.witnesses().iter().map(|&e| p.apply(e)).collect();
                mapped.sort();
                ensure(mapped == vg.witnesses(), || format!("{c} witnesses not mapped"))?;
                if let (Verdict::Fails { required: r1, achieved: a1 }, Verdict::Fails { required: r2, achieved: a2 }) = (&vf, &vg) {
                    ensure(r1 == r2 && a1 == a2, || format!("{c} counts changed"))?;
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} (family, permutation) pairs"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("AC1 n=9 fixture reproduction", ac1_fixture),
        ("AC2 enumeration = naive oracle (n<=4)", ac2_oracle_equivalence),
        ("AC3 no S1 failure for n in 2..=4", ac3_small_s1),
        ("AC4 no S1 failure for n=5", ac4_n5_s1),
        ("AC5 implication chain and Frankl (n<=5)", ac5_implication_chain),
        ("AC6 disjoint pair => two abundant (n<=5)", ac6_disjoint_pairs),
        ("AC7 averaging soundness and coverage", ac7_averaging),
        ("AC8 closure properties", ac8_closure),
        ("AC9 permutation invariance", ac9_permutations),
    ];
    let mut failed = HashSet::new();
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                println!("FAIL  {name}: {detail}");
                failed.insert(name);
            }
        }
    }
    println!(
        "acceptance: {} passed, {} failed",
        criteria.len() - failed.len(),
        failed.len()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach stdout.
//! Criteria whose failure has been traced to the source data are listed in
//! `KNOWN`; they must fail with exactly that diagnosis, and any other
//! outcome (including an unexpected pass) fails the run.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use cccforge::bounds::{self, BoundValue};
use cccforge::constructions::{run_pipeline, shorten, Context, Pipeline};
use cccforge::core::format::{code_to_json, gdc_to_json, load_code, parse_code, CodeFile};
use cccforge::core::{distance, hamming, verify_code, verify_gdc, Code, Codeword};
use cccforge::designs::{
    backtrack_design, load_design, td_prime_power, verify_design, DesignSpec, SearchOutcome,
};
use cccforge::devgen::{audit_catalog, catalog_files, load_entry, translate, Developed, Recipe, RecipeKind};
use cccforge::rooms::run_room_pipeline;
use cccforge::search::{max_code_exact, verify_lower_bound};
use cccforge::{catalog_dir, data_dir, Error};

struct Outcome {
    pass: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { pass: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { pass: false, detail: detail.into() }
}

/// Criteria expected to fail, with the exact diagnosis they must report.
const KNOWN: &[(u32, &str)] = &[
    (1, "d5_code_13: words <0,3,5,11> and <5,11,3,0> are at distance 4 < 5"),
    (4, "n=24: strong: pair sums in the hole from {14,22}"),
];

fn entry_size(name: &str) -> Result<(usize, bool), String> {
    let r = load_entry(&catalog_dir(), name).map_err(|e| format!("{name}: {e}"))?;
    let dev = r.expand().map_err(|e| format!("{name}: {e}"))?;
    let rep = match &dev {
        Developed::Code(c) => verify_code(c),
        Developed::Gdc(g) => verify_gdc(g),
    };
    Ok((dev.code().len(), rep.passed))
}

fn catalog_audit() -> Outcome {
    let report = match audit_catalog(&catalog_dir()) {
        Ok(r) => r,
        Err(e) => return fail(format!("catalog unreadable: {e}")),
    };
    let named = [
        ("d5_gdc_2^8", 112),
        ("d5_gdc_6^5", 360),
        ("d6_gdc_1^12_2^1", 28),
        ("d6_code_17", 42),
        ("d6_code_23", 80),
        ("d6_code_35", 192),
        ("d5_code_8", 18),
    ];
    for (name, want) in named {
        match entry_size(name) {
            Ok((size, true)) if size == want => {}
            Ok((size, ok)) => return fail(format!("{name}: size {size}, verified {ok}, expected {want}")),
            Err(e) => return fail(e),
        }
    }
    let failures = report.failures();
    let total = report.entries.len();
    match failures.as_slice() {
        [] => pass(format!("{total} entries expand, verify and match their stated sizes")),
        [e, ..] => fail(format!(
            "{}: {}{}",
            e.name,
            e.detail,
            if failures.len() > 1 { format!(" (+{} more)", failures.len() - 1) } else { String::new() }
        )),
    }
}

fn bounds_identities() -> Outcome {
    let w = [2, 1, 1];
    for n in 4..=200u64 {
        let u5 = bounds::u5(n).unwrap();
        let u6 = bounds::u6(n).unwrap();
        if u5 != n * ((n - 1) / 2) || bounds::johnson_chain(n, 5, &w).ok() != Some(u5) {
            return fail(format!("u5({n}) = {u5} disagrees with the Johnson chain"));
        }
        if u6 != n * ((n - 1) / 3) / 2 || bounds::near_extreme(n, 6, &w).ok().flatten() != Some(u6) {
            return fail(format!("u6({n}) = {u6} disagrees with the near-extreme bound"));
        }
    }
    for (n, want) in [(17, 42), (23, 80), (35, 192)] {
        let u = bounds::u6(n).unwrap();
        let listed = entry_size(&format!("d6_code_{n}")).map(|(s, _)| s as u64);
        if u != want || listed != Ok(want) {
            return fail(format!("u6({n}) = {u}, listed code {listed:?}, expected {want}"));
        }
    }
    pass("u5, u6 match their derivations for 4 <= n <= 200; u6(17,23,35) = 42, 80, 192")
}

fn exact_search() -> Outcome {
    let cases = [(4, 5, 1), (5, 5, 2), (6, 5, 6), (7, 5, 10), (4, 6, 1), (5, 6, 1), (6, 6, 3), (7, 6, 4)];
    let mut seen = Vec::new();
    for (n, d, want) in cases {
        let t = Instant::now();
        let r = match max_code_exact(n, d, Duration::from_secs(60)) {
            Ok(r) => r,
            Err(e) => return fail(format!("({n},{d}): {e}")),
        };
        if r.size != want || !r.proven || !verify_code(&r.witness).passed {
            return fail(format!("({n},{d}): size {} proven {} (expected {want})", r.size, r.proven));
        }
        if let Ok(bounds::BoundResult { value: BoundValue::Exact(v), .. }) = bounds::summary_value(n as u64, d as u64) {
            if v as usize != r.size {
                return fail(format!("({n},{d}): search {} but summary {v}", r.size));
            }
        }
        seen.push(format!("A({n},{d})={} in {:.1}s", r.size, t.elapsed().as_secs_f64()));
    }
    pass(seen.join(", "))
}

fn room_pipeline() -> Outcome {
    let odd = [19, 21, 23, 25, 27];
    let even = [24, 26, 34];
    for n in odd.iter().chain(&even) {
        let name = format!("d5_starter_{n}");
        let r = match load_entry(&catalog_dir(), &name) {
            Ok(r) => r,
            Err(e) => return fail(format!("n={n}: {e}")),
        };
        let want_kind = if n % 2 == 1 { RecipeKind::Starter } else { RecipeKind::FrameStarter };
        if r.kind != want_kind {
            return fail(format!("n={n}: entry is {:?}", r.kind));
        }
        let rep = run_room_pipeline(&r);
        if !rep.passed {
            return fail(format!("n={n}: {}", rep.failure.unwrap_or_default()));
        }
        if rep.code_size.map(|s| s as u64) != bounds::u5(*n as u64).ok() {
            return fail(format!("n={n}: code size {:?}", rep.code_size));
        }
    }
    pass(format!("starters {odd:?} and frame starters {even:?} give super-simple Room arrays and codes of size u5(n)"))
}

fn pipeline(name: &str, want_n: u32, want_size: usize) -> Outcome {
    let dir = data_dir().join("pipelines");
    let p = match Pipeline::load(&dir.join(format!("{name}.json"))) {
        Ok(p) => p,
        Err(e) => return fail(format!("{name}: {e}")),
    };
    let (report, artifacts) = run_pipeline(&p, &Context::new(dir, catalog_dir()));
    if let Some(bad) = report.steps.iter().find(|s| s.status != cccforge::constructions::StepStatus::Ok) {
        return fail(format!("step {} ({}): {:?} {}", bad.id, bad.op, bad.status, bad.detail));
    }
    let last = report.last().expect("pipeline has steps");
    let Some(cccforge::constructions::pipeline::Artifact::Code(code)) = artifacts.get(&last.id) else {
        return fail("last step is not a plain code");
    };
    let bound = bounds::u_bound(want_n as u64, code.d as u64).unwrap_or(0) as usize;
    if code.n() != want_n || code.len() != want_size || bound != want_size || !verify_code(code).passed {
        return fail(format!("got ({}, {}) size {}, bound {bound}", code.n(), code.d, code.len()));
    }
    let trail: Vec<String> = report.steps.iter().filter_map(|s| s.size.map(|z| format!("{}={z}", s.id))).collect();
    pass(format!("{} -> ({want_n},{}) code of size {want_size} = U", trail.join(", "), code.d))
}

fn shortening() -> Outcome {
    let code13 = match load_entry(&catalog_dir(), "d6_code_13").and_then(|r| r.expand()) {
        Ok(Developed::Code(c)) => c,
        Ok(_) => return fail("d6_code_13 is not a plain code"),
        Err(e) => return fail(e.to_string()),
    };
    let census = code13.coordinate_census();
    if census.iter().any(|&c| c != 8) {
        return fail(format!("census before shortening {census:?}"));
    }
    let short = match shorten(&code13, 12) {
        Ok(c) => c,
        Err(e) => return fail(e.to_string()),
    };
    if short.len() != 18 || bounds::u6(12).ok() != Some(18) || !verify_code(&short).passed {
        return fail(format!("shortened code has {} words", short.len()));
    }
    pass("census 8 at all 13 coordinates; shortened (12,6) code has 18 = u6(12) words")
}

fn word(n: u32) -> impl Strategy<Value = Codeword> {
    proptest::sample::subsequence((0..n).collect::<Vec<u32>>(), 4)
        .prop_shuffle()
        .prop_map(|v| Codeword::new([v[0], v[1], v[2], v[3]]).expect("distinct points"))
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config { cases, failure_persistence: None, ..Config::default() },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn metric_axioms() -> Result<(), String> {
    let strat = (4u32..=12).prop_flat_map(|n| (Just(n), word(n), word(n), word(n)));
    runner(1000)
        .run(&strat, |(n, x, y, z)| {
            let (vx, vy) = (x.to_vector(n).unwrap(), y.to_vector(n).unwrap());
            prop_assert_eq!(distance(&x, &x), 0);
            prop_assert_eq!(distance(&x, &y), distance(&y, &x));
            prop_assert!(distance(&x, &z) <= distance(&x, &y) + distance(&y, &z));
            prop_assert_eq!(distance(&x, &y) as usize, hamming(&vx, &vy).unwrap());
            prop_assert_eq!(distance(&x, &y) == 0, x == y);
            Ok(())
        })
        .map_err(|e| format!("metric axioms: {e}"))
}

fn round_trips() -> Result<(), String> {
    let strat = (4u32..=10).prop_flat_map(|n| (Just(n), proptest::collection::vec(word(n), 0..12)));
    runner(200)
        .run(&strat, |(n, words)| {
            for w in &words {
                prop_assert_eq!(Codeword::from_vector(&w.to_vector(n).unwrap()).unwrap(), *w);
            }
            let code = Code::new(cccforge::PointSet::finite(n), 5, words);
            let text = code_to_json(&code);
            let back = parse_code(&text).unwrap();
            prop_assert_eq!(back.code(), &code);
            prop_assert_eq!(code_to_json(back.code()), text);
            Ok(())
        })
        .map_err(|e| format!("round trip: {e}"))?;
    for name in ["d6_gdc_3^5", "d5_gdc_4^5", "d5_code_13"] {
        let r = load_entry(&catalog_dir(), name).map_err(|e| e.to_string())?;
        let text = match r.expand().map_err(|e| e.to_string())? {
            Developed::Code(c) => code_to_json(&c),
            Developed::Gdc(g) => gdc_to_json(&g),
        };
        let again = match parse_code(&text).map_err(|e| e.to_string())? {
            CodeFile::Code(c) => code_to_json(&c),
            CodeFile::Gdc(g) => gdc_to_json(&g),
        };
        if again != text {
            return Err(format!("{name} does not round-trip"));
        }
    }
    Ok(())
}

fn development_closure() -> Result<usize, String> {
    let recipes: Vec<Recipe> = catalog_files(&catalog_dir())
        .map_err(|e| e.to_string())?
        .iter()
        .filter_map(|p| Recipe::load(p).ok())
        .filter(|r| matches!(r.kind, RecipeKind::Code | RecipeKind::Gdc) && r.v <= 80)
        .collect();
    let strat = proptest::sample::subsequence((0..recipes.len()).collect::<Vec<_>>(), 20);
    let checked = std::cell::RefCell::new(BTreeSet::new());
    runner(1)
        .run(&strat, |picks| {
            for i in picks {
                let r = &recipes[i];
                let ps = r.point_set().unwrap();
                let code = r.expand().unwrap().code().clone();
                let words: BTreeSet<Codeword> = code.words().iter().copied().collect();
                for w in code.words() {
                    let moved = Codeword::new(translate(&ps, w.points(), r.step as u64)).unwrap();
                    prop_assert!(words.contains(&moved), "{} not closed under +{}", r.source, r.step);
                }
                checked.borrow_mut().insert(i);
            }
            Ok(())
        })
        .map_err(|e| format!("development closure: {e}"))?;
    let n = checked.borrow().len();
    Ok(n)
}

fn td_checks() -> Result<usize, String> {
    let mut count = 0;
    for q in [3, 4, 5, 7, 8, 9] {
        for k in 3..=q + 1 {
            let td = td_prime_power(k, q).map_err(|e| format!("TD({k},{q}): {e}"))?;
            let rep = verify_design(&td);
            if !rep.passed {
                return Err(format!("TD({k},{q}): {}", rep.violations.join("; ")));
            }
            count += 1;
        }
    }
    Ok(count)
}

fn fixture(name: &str) -> PathBuf {
    data_dir().join("fixtures").join(name)
}

fn negative_fixtures() -> Result<usize, String> {
    let verdict = |name: &str| -> Result<String, String> {
        match load_code(&fixture(name)) {
            Ok(CodeFile::Code(c)) => Ok(verify_code(&c).first_violation(&c).unwrap_or_else(|| "PASS".into())),
            Ok(CodeFile::Gdc(g)) => Ok(verify_gdc(&g).first_violation(&g.code).unwrap_or_else(|| "PASS".into())),
            Err(e) => Err(e.to_string()),
        }
    };
    let expect_ok = [
        ("good_code_6_6.json", "PASS"),
        ("corrupted_distance.json", "words <0,1,2,3> and <0,1,2,4> are at distance 2 < 6"),
        ("repeated_point.json", "word <2,4,2,5> has composition other than [2,1,1]"),
        ("bad_group.json", "word <0,2,4,5> meets a group twice"),
    ];
    for (name, want) in expect_ok {
        let got = verdict(name).map_err(|e| format!("{name}: {e}"))?;
        if got != want {
            return Err(format!("{name}: got {got:?}, expected {want:?}"));
        }
    }
    let expect_err = [
        ("bad_composition.json", "composition [1, 1, 1, 1] is not [2, 1, 1]"),
        ("unknown_point.json", "point 9 is not in the point set"),
        ("malformed.json", "json error"),
    ];
    for (name, want) in expect_err {
        match verdict(name) {
            Err(e) if e.contains(want) => {}
            other => return Err(format!("{name}: got {other:?}, expected an error containing {want:?}")),
        }
    }
    let pbd = load_design(&fixture("bad_pbd_13.json")).map_err(|e| e.to_string())?;
    let rep = verify_design(&pbd);
    if rep.passed || !rep.violations.iter().any(|v| v == "pair {0, 10} covered 2 times, expected 1") {
        return Err(format!("bad_pbd_13: {:?}", rep.violations));
    }
    let gdd = load_design(&fixture("bad_gdd_2^3.json")).map_err(|e| e.to_string())?;
    let rep = verify_design(&gdd);
    if rep.passed || rep.violations.first().map(String::as_str) != Some("pair {0, 2} covered 2 times, expected 1") {
        return Err(format!("bad_gdd_2^3: {:?}", rep.violations));
    }
    let spec = DesignSpec::Gdd { k: 4, group_type: vec![(2, 4)] };
    if backtrack_design(&spec, 1_000_000).map_err(|e| e.to_string())? != SearchOutcome::Exhausted {
        return Err("4-GDD of type 2^4 was not shown nonexistent".into());
    }
    if !matches!(td_prime_power(4, 6), Err(Error::Domain(_))) {
        return Err("TD(4,6) from a field should be rejected".into());
    }
    Ok(expect_ok.len() + expect_err.len() + 4)
}

fn properties() -> Outcome {
    let run = || -> Result<String, String> {
        metric_axioms()?;
        round_trips()?;
        let recipes = development_closure()?;
        let tds = td_checks()?;
        let negatives = negative_fixtures()?;
        Ok(format!(
            "1000 metric triples, round trips, closure of {recipes} recipes, {tds} TDs, {negatives} negative fixtures"
        ))
    };
    match run() {
        Ok(s) => pass(s),
        Err(e) => fail(e),
    }
}

fn lower_bounds() -> String {
    let mut out = Vec::new();
    for (n, claimed) in [(8, 18), (9, 27), (10, 36), (11, 48), (13, 72)] {
        let ok = load_entry(&catalog_dir(), &format!("d5_code_{n}"))
            .and_then(|r| r.expand())
            .map(|d| verify_lower_bound(d.code(), n, 5, claimed))
            .unwrap_or(false);
        out.push(format!("n={n} >= {claimed}: {}", if ok { "yes" } else { "no" }));
    }
    out.join(", ")
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (1, "catalog audit", catalog_audit),
        (2, "bounds identities", bounds_identities),
        (3, "exact search oracle", exact_search),
        (4, "Room pipeline", room_pipeline),
        (5, "pipeline 60-optimal", || pipeline("60-optimal", 60, 1740)),
        (6, "pipeline 49-optimal", || pipeline("49-optimal", 49, 392)),
        (7, "shortening", shortening),
        (8, "property suites", properties),
    ];
    let mut unexpected = 0;
    for (id, title, check) in criteria {
        let t = Instant::now();
        let o = check();
        let known = KNOWN.iter().find(|(k, _)| *k == id).map(|(_, d)| *d);
        let verdict = match (o.pass, known) {
            (true, None) => "PASS",
            (false, Some(d)) if o.detail == d => "FAIL (diagnosed)",
            _ => {
                unexpected += 1;
                if o.pass {
                    "PASS (unexpected; update the diagnosis)"
                } else {
                    "FAIL"
                }
            }
        };
        println!("criterion {id} [{title}]: {verdict}: {} ({:.1}s)", o.detail, t.elapsed().as_secs_f64());
    }
    println!("explicit lower bounds, d=5: {}", lower_bounds());
    if unexpected == 0 {
        println!("acceptance: {} criteria as expected ({} diagnosed failures)", criteria.len(), KNOWN.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {unexpected} criteria deviate from the expected outcome");
        ExitCode::FAILURE
    }
}

//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use circle_titchmarsh::cyclotomic::{determinant, CycloNumber};
use circle_titchmarsh::distribution::deltas;
use circle_titchmarsh::fuzz::{self, FailureKind, FuzzConfig, FuzzReport, Suite};
use circle_titchmarsh::rational::ratio;
use circle_titchmarsh::titchmarsh::{
    analyze_pair, analyze_reflection, vandermonde_matrix, Engine, Mutation, ReflectionOutcome,
};

struct Outcome {
    passed: bool,
    detail: String,
    elapsed: Duration,
}

fn run_suite(suite: Suite, mix: f64) -> (FuzzReport, Duration) {
    let config = FuzzConfig {
        suites: vec![suite],
        mix,
        ..FuzzConfig::default()
    };
    let start = Instant::now();
    let report = fuzz::run(&config);
    (report, start.elapsed())
}

fn summarize(report: &FuzzReport) -> String {
    match report.failures.first() {
        None => format!("{} instances, 0 failures", report.summaries.iter().map(|s| s.instances).sum::<usize>()),
        Some(f) => format!("{} failures, first: {} {}", report.failures.len(), f.label, f.failure.message),
    }
}

fn suite_criterion(report: &FuzzReport, elapsed: Duration, expected: usize, suite: Suite) -> Outcome {
    let count = report.instances(suite);
    Outcome {
        passed: report.passed() && count == expected,
        detail: summarize(report),
        elapsed,
    }
}

fn oracle_failures(report: &FuzzReport) -> usize {
    report.failures.iter().filter(|f| f.failure.kind == FailureKind::Oracle).count()
}

fn main() -> ExitCode {
    let mut results: Vec<(u32, &str, Duration, Outcome)> = Vec::new();
    let mut reports: Vec<FuzzReport> = Vec::new();
    let mut suite_time = Duration::ZERO;

    let (r, t) = run_suite(Suite::ZeroDivisor, 0.5);
    results.push((1, "zero-divisor identity", Duration::from_secs(10), suite_criterion(&r, t, 1000, Suite::ZeroDivisor)));
    suite_time += t;
    reports.push(r);

    let (r, t) = run_suite(Suite::Lemma, 0.5);
    results.push((2, "inf-support lemma", Duration::from_secs(30), suite_criterion(&r, t, 5000, Suite::Lemma)));
    suite_time += t;
    reports.push(r);

    let (r, t) = run_suite(Suite::Pair, 1.0);
    let mut c3 = suite_criterion(&r, t, 3000, Suite::Pair);
    let positive = r.tag_count(Suite::Pair, "lambda>0");
    let f = deltas(&[(1, (0, 1)), (-1, (1, 2))]);
    let g = deltas(&[(1, (0, 1)), (1, (1, 2)), (1, (1, 8)), (-1, (5, 8))]);
    let worked = analyze_pair(&f, &g, 2).is_ok_and(|rep| {
        rep.lambda == Some(ratio(1, 8))
            && rep.alpha.as_ref().is_some_and(|a| a.value.is_one())
            && rep.beta.as_ref().is_some_and(|b| b.value == CycloNumber::from_int(-1))
            && rep.all_verified()
    });
    c3.passed &= worked && positive > 0;
    c3.detail = format!("{}; {positive} with λ > 0; worked pair {}", c3.detail, if worked { "ok" } else { "WRONG" });
    results.push((3, "pair certificates", Duration::from_secs(60), c3));
    suite_time += t;
    reports.push(r);

    let (r, t) = run_suite(Suite::Corollary, 0.5);
    let mut c4 = suite_criterion(&r, t, 1000, Suite::Corollary);
    c4.detail = format!("{}; {} annihilated", c4.detail, r.tag_count(Suite::Corollary, "annihilated"));
    results.push((4, "n = 2 equivalence", Duration::from_secs(30), c4));
    suite_time += t;
    reports.push(r);

    let (r, t) = run_suite(Suite::Reflection, 0.5);
    let mut c5 = suite_criterion(&r, t, 500, Suite::Reflection);
    let four = deltas(&[(1, (1, 16)), (1, (9, 16)), (1, (15, 16)), (-1, (7, 16))]);
    let example = matches!(
        analyze_reflection(&four),
        Ok(ReflectionOutcome::Decomposed(ref d))
            if d.mu == deltas(&[(1, (1, 16))]) && d.nu == deltas(&[(1, (15, 16))]) && d.reassemble() == four
    );
    c5.passed &= example;
    c5.detail = format!("{}; four-delta example {}", c5.detail, if example { "ok" } else { "WRONG" });
    results.push((5, "reflection decomposition", Duration::from_secs(30), c5));
    suite_time += t;
    reports.push(r);

    let (r, t) = run_suite(Suite::Power, 0.5);
    results.push((6, "powers", Duration::from_secs(60), suite_criterion(&r, t, 3000, Suite::Power)));
    suite_time += t;
    reports.push(r);

    // Every instance above already went through both oracle checks.
    let oracle_bad: usize = reports.iter().map(oracle_failures).sum();
    let budget_1_6: Duration = results.iter().map(|(_, _, b, _)| *b).sum();
    results.push((
        7,
        "oracle agreement",
        budget_1_6 + Duration::from_secs(60),
        Outcome {
            passed: oracle_bad == 0,
            detail: format!("{oracle_bad} oracle disagreements across criteria 1-6"),
            elapsed: suite_time,
        },
    ));

    let start = Instant::now();
    let mut zero_at = Vec::new();
    for n in 1..=12 {
        match determinant(vandermonde_matrix(n)) {
            Ok(det) if !det.is_zero() => {}
            _ => zero_at.push(n),
        }
    }
    results.push((
        8,
        "Vandermonde determinants",
        Duration::from_secs(5),
        Outcome {
            passed: zero_at.is_empty(),
            detail: if zero_at.is_empty() { "nonzero for n = 1..12".into() } else { format!("zero for n in {zero_at:?}") },
            elapsed: start.elapsed(),
        },
    ));

    let start = Instant::now();
    let full = fuzz::run(&FuzzConfig::default());
    let mutated = fuzz::run(&FuzzConfig {
        suites: vec![Suite::Pair],
        mix: 1.0,
        engine: Engine::with_mutation(Mutation::SymmetrizeSignFlip),
        ..FuzzConfig::default()
    });
    let caught = !mutated.passed();
    results.push((
        9,
        "default fuzz and mutation smoke test",
        Duration::MAX,
        Outcome {
            passed: full.theorem_violations() == 0 && full.passed() && caught,
            detail: format!(
                "{} theorem violations, {} failures in the default run; mutated engine {}",
                full.theorem_violations(),
                full.failures.len(),
                if caught { format!("caught ({} failures)", mutated.failures.len()) } else { "NOT caught".into() }
            ),
            elapsed: start.elapsed(),
        },
    ));

    let mut all = true;
    for (id, name, budget, o) in &results {
        let in_time = o.elapsed < *budget;
        let ok = o.passed && in_time;
        all &= ok;
        let limit = if *budget == Duration::MAX { "no limit".to_string() } else { format!("limit {:.0} s", budget.as_secs_f64()) };
        println!(
            "criterion {id} {}: {name}: {} ({:.2} s, {limit}{})",
            if ok { "PASS" } else { "FAIL" },
            o.detail,
            o.elapsed.as_secs_f64(),
            if in_time { "" } else { ", over time" }
        );
    }
    println!("acceptance: {}", if all { "PASS" } else { "FAIL" });
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

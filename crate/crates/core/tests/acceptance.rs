//! Acceptance runner: evaluates every criterion in sequence and prints one
//! `PASS`/`FAIL` line each, followed by a summary.
//!
//! Criteria listed in `KNOWN_FAILURES` compare against stated constants that
//! disagree with the exact computation; their lines still read `FAIL`. The
//! process exits nonzero when any other criterion fails or when a listed one
//! starts passing.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use l2lab::dimension::{
    beta_constants, dimension_closed_form, dimension_closed_form_with, dimension_direct_sum, hook_sum_beta_constants, u_sum_direct,
    u_sum_exact, u_sum_printed, DimensionEnclosure,
};
use l2lab::dyadic::{approx_f64, floor_log2, pow2_rational, rational, rational_string};
use l2lab::verify::{run_suite, SuiteReport, VerifyOptions};
use l2lab::IndexSetSpec;

const KNOWN_FAILURES: [u32; 2] = [4, 5];

struct Outcome {
    criterion: u32,
    title: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
    limit: Option<Duration>,
}

impl Outcome {
    fn ok(&self) -> bool {
        self.passed && self.limit.is_none_or(|l| self.elapsed <= l)
    }

    fn line(&self) -> String {
        let budget = self.limit.map_or(String::new(), |l| format!(" (limit {l:.0?})"));
        let verdict = if self.ok() { "PASS" } else { "FAIL" };
        format!("{verdict} criterion {}: {} [{:.2?}{budget}] {}", self.criterion, self.title, self.elapsed, self.detail)
    }
}

fn from_suite(criterion: u32, title: &'static str, name: &str, limit: Option<Duration>) -> Outcome {
    let start = Instant::now();
    let (passed, detail) = match run_suite(name, &VerifyOptions::default()) {
        Ok(rep) => (rep.passed(), summary(&rep)),
        Err(e) => (false, format!("suite error: {e}")),
    };
    Outcome { criterion, title, passed, detail, elapsed: start.elapsed(), limit }
}

fn summary(rep: &SuiteReport) -> String {
    rep.checks.iter().map(|c| format!("{}: {}", c.name, c.detail)).collect::<Vec<_>>().join(" | ")
}

/// A decimal approximation and a dyadic bound on the width.
fn enc(e: &DimensionEnclosure) -> String {
    let width = match floor_log2(&e.width()) {
        Some(k) => format!("width < 2^{}", k + 1),
        None => "width 0".into(),
    };
    format!("~{:.12e} ({width})", approx_f64(&e.lower))
}

fn main_value() -> Outcome {
    let start = Instant::now();
    let b = beta_constants();
    let cap = pow2_rational(-200);
    let hook = hook_sum_beta_constants();
    let mut passed = b.beta1 == rational(3, 261121) && b.beta2 == rational(6144, 261121);
    let mut detail = vec![format!("beta1 = {}, beta2 = {}", rational_string(&b.beta1), rational_string(&b.beta2))];
    for elems in [vec![2u64], vec![2, 5]] {
        let set = IndexSetSpec::explicit(elems.clone());
        let (closed, direct, corrected) =
            match (dimension_closed_form(&set, 4), dimension_direct_sum(&set, 80), dimension_closed_form_with(&set, 4, &hook)) {
                (Ok(a), Ok(b), Ok(c)) => (a, b, c),
                _ => {
                    passed = false;
                    detail.push(format!("I = {elems:?}: evaluation error"));
                    continue;
                }
            };
        let agree = closed.intersects(&direct) && closed.width() <= cap && direct.width() <= cap;
        passed &= agree;
        detail.push(format!(
            "I = {elems:?}: closed form {} {} direct sum {}; hook-sum constants {}, {} give {} (agree: {})",
            enc(&closed),
            if agree { "meets" } else { "misses" },
            enc(&direct),
            rational_string(&hook.beta1),
            rational_string(&hook.beta2),
            enc(&corrected),
            corrected.intersects(&direct),
        ));
    }
    Outcome {
        criterion: 4,
        title: "closed form with the stated constants against the direct sum",
        passed,
        detail: detail.join(" | "),
        elapsed: start.elapsed(),
        limit: Some(Duration::from_secs(30)),
    }
}

fn single_u_sum() -> Outcome {
    let start = Instant::now();
    let cap = pow2_rational(-150);
    let mut passed = true;
    let mut detail = Vec::new();
    for n in [2u64, 5] {
        let Ok(direct) = u_sum_direct(n, 80) else {
            passed = false;
            detail.push(format!("n_k = {n}: evaluation error"));
            continue;
        };
        let printed = u_sum_printed(n);
        let hit = direct.contains(&printed) && direct.width() <= cap;
        passed &= hit;
        detail.push(format!(
            "n_k = {n}: stated {} ~{:.12e} {} truncated sum {}; exact value {} (contained: {})",
            rational_string(&printed),
            approx_f64(&printed),
            if hit { "inside" } else { "outside" },
            enc(&direct),
            rational_string(&u_sum_exact(n)),
            direct.contains(&u_sum_exact(n)),
        ));
    }
    Outcome {
        criterion: 5,
        title: "single U_k closed form against the truncated double sum",
        passed,
        detail: detail.join(" | "),
        elapsed: start.elapsed(),
        limit: None,
    }
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let runs: Vec<Box<dyn Fn() -> Outcome>> = vec![
        Box::new(move || from_suite(1, "eigenvalue -2 parity law for 2 <= l <= 500", "models", secs(10))),
        Box::new(move || from_suite(2, "brute-force count equals 2^(|E|-K)", "counting", secs(60))),
        Box::new(move || from_suite(3, "hook cylinder frequencies within 4 sigma", "measures", secs(120))),
        Box::new(main_value),
        Box::new(single_u_sum),
        Box::new(|| from_suite(6, "F/G table and its transpose", "table", None)),
        Box::new(|| from_suite(7, "windowed operator on hooks equals the path models", "operator", None)),
        Box::new(|| from_suite(8, "digit splitting is exact and well formed", "splitting", None)),
        Box::new(|| from_suite(9, "membership certificates and rejections", "member", None)),
        Box::new(|| from_suite(10, "D_(g,N) bound and frequencies", "nullset", None)),
    ];
    let mut unexpected = Vec::new();
    let mut failing = Vec::new();
    for run in runs {
        let out = run();
        println!("{}", out.line());
        let known = KNOWN_FAILURES.contains(&out.criterion);
        if !out.ok() {
            failing.push(out.criterion);
        }
        if out.ok() == known {
            unexpected.push(out.criterion);
        }
    }
    println!("acceptance: {} of 10 criteria pass; failing: {failing:?}; known failures: {KNOWN_FAILURES:?}", 10 - failing.len());
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: outcome differs from the known-failure list for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}

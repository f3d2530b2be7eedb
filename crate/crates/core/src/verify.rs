//! Cross-module oracle suites. Every suite is deterministic in its seed and
//! reports one [`Check`] per property it tests.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::closure::split_digits;
use crate::dimension::{
    beta_constants, dimension_closed_form, dimension_closed_form_with, dimension_direct_sum, hook_sum_beta_constants, u_sum_direct,
    u_sum_exact, u_sum_printed, DimensionEnclosure,
};
use crate::dyadic::{pow2_rational, rational, rational_string, ExactDyadic};
use crate::error::{Error, Result};
use crate::finite_models::{apply, build_model, kernel_dim_minus_two, kernel_vector};
use crate::group::{ball, neighborhood, t_generator, Gen, GroupElement, GroupId};
use crate::index_set::IndexSetSpec;
use crate::local_rules::{classify_configuration, windowed_operator, Classifier, ConfigClass, Hook, LocalClass, Pattern};
use crate::measure::{
    brute_count_extendable, count_extendable, dg_bound, dg_pattern, dg_window, estimate_event_bits, hook_measure, horizontal_hull,
    CharacterSampler, RelationSystem,
};
use crate::word_problem::{generator_w, is_in_v, verify_certificate, GF2Vector, Membership};

pub const SUITES: [&str; 10] =
    ["measures", "counting", "models", "member", "route", "table", "partition", "operator", "splitting", "nullset"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: &str, seed: u64) -> Self {
        SuiteReport { suite: suite.into(), seed, checks: Vec::new() }
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        write!(f, "suite {} (seed {}): {}", self.suite, self.seed, if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Sizes of the randomized parts of the suites.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyOptions {
    pub seed: u64,
    pub samples: u64,
    pub completions: usize,
    pub member_trials: usize,
    pub model_l_max: usize,
    pub windows: usize,
    pub digit_sets: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0,
            samples: 1_000_000,
            completions: 100_000,
            member_trials: 1000,
            model_l_max: 500,
            windows: 150,
            digit_sets: 100,
        }
    }
}

pub fn run_suite(name: &str, opts: &VerifyOptions) -> Result<SuiteReport> {
    match name {
        "measures" => measures_suite(opts),
        "counting" => counting_suite(opts),
        "models" => models_suite(opts),
        "member" => member_suite(opts),
        "route" => route_suite(opts),
        "table" => table_suite(opts),
        "partition" => partition_suite(opts),
        "operator" => operator_suite(opts),
        "splitting" => splitting_suite(opts),
        "nullset" => nullset_suite(opts),
        other => Err(Error::Validation(format!("unknown suite {other:?}; expected one of {}", SUITES.join(", ")))),
    }
}

fn groups() -> [GroupId; 2] {
    [GroupId::Free2, GroupId::WreathZZ]
}

fn i2() -> IndexSetSpec {
    IndexSetSpec::explicit(vec![2])
}

fn hook_cylinder(group: GroupId, n: u32, m: u32, samples: u64, seed: u64) -> Result<(crate::measure::EventEstimate, BigRational)> {
    let hook = Hook::new(GroupElement::identity(group), n, m);
    let sys = RelationSystem::for_hook(&hook, i2());
    let sampler = CharacterSampler::new(&sys)?;
    let event = sampler.cylinder_event(&hook.indicator(1))?;
    let est = estimate_event_bits(&sampler, event, samples, seed)?;
    Ok((est, hook_measure(n, m, &i2())?.to_rational()))
}

/// Monte-Carlo hook cylinders against `2^{−3(n+m)−8+K}`.
pub fn measures_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("measures", opts.seed);
    for group in groups() {
        for (k, (n, m)) in [(1, 1), (2, 2)].into_iter().enumerate() {
            let (est, p) = hook_cylinder(group, n, m, opts.samples, opts.seed.wrapping_add(k as u64))?;
            rep.push(
                format!("hook ({n},{m}) {group}"),
                est.within_sigmas(&p, 4),
                format!("{} hits / {} samples, exact {}", est.hits, est.samples, rational_string(&p)),
            );
        }
    }
    Ok(rep)
}

/// A horizontally connected window: segments on a few coset lines, chosen among
/// lines `h⟨s₁⟩` and `h·t_n⟨s₁⟩` so that equivalent translates occur.
fn random_window(group: GroupId, rng: &mut ChaCha8Rng, bases: &[GroupElement], max_points: usize) -> BTreeSet<GroupElement> {
    let h = bases.choose(rng).expect("nonempty").clone();
    let mut reps = vec![h.coset_split().0];
    for n in 1..=5 {
        let t = t_generator(n, group);
        reps.push(h.times(&t).coset_split().0);
        reps.push(h.times(&t.inverse()).coset_split().0);
    }
    reps.push(h.mul_s2_power(1).coset_split().0);
    let lines = rng.gen_range(2..=5);
    let mut pts = BTreeSet::new();
    for _ in 0..lines {
        let rep = reps.choose(rng).expect("nonempty").clone();
        let start = rng.gen_range(-3..=-1);
        let len = rng.gen_range(3..=7);
        for a in start..start + len {
            pts.insert(rep.mul_s1_power(a));
        }
    }
    let mut hull: Vec<GroupElement> = horizontal_hull(&pts).into_iter().collect();
    // dropping whole lines keeps the window horizontally connected
    while hull.len() > max_points {
        let rep = hull.last().expect("nonempty").coset_split().0;
        hull.retain(|g| g.coset_split().0 != rep);
    }
    if hull.is_empty() {
        hull.push(GroupElement::identity(group));
    }
    hull.into_iter().collect()
}

fn random_subset(rng: &mut ChaCha8Rng, universe: &[u64]) -> IndexSetSpec {
    IndexSetSpec::explicit(universe.iter().copied().filter(|_| rng.gen_bool(0.5)).collect())
}

/// `2^{|E|−K}` against brute-force enumeration on random connected windows.
pub fn counting_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("counting", opts.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut mismatches = Vec::new();
    let (mut constrained, mut largest) = (0, 0);
    let bases: BTreeMap<GroupId, Vec<GroupElement>> = groups().into_iter().map(|g| ball(2, g).map(|b| (g, b))).collect::<Result<_>>()?;
    for w in 0..opts.windows {
        let group = groups()[w % 2];
        let window = random_window(group, &mut rng, &bases[&group], 20);
        let lambda = random_subset(&mut rng, &[1, 2, 3, 4, 5]);
        let sys = RelationSystem::new(group, lambda, window.iter().cloned());
        let formula = count_extendable(&sys)?;
        let brute = brute_count_extendable(&sys)?;
        if formula != ExactDyadic::from_integer(brute) {
            mismatches.push(format!("{group} |E|={} formula {formula} brute {brute}", window.len()));
        }
        constrained += usize::from(brute < 1u64 << window.len());
        largest = largest.max(window.len());
    }
    rep.push(
        "counting law",
        mismatches.is_empty() && opts.windows >= 1,
        if mismatches.is_empty() {
            format!("{} windows agree, {constrained} with constraints, largest |E| = {largest}", opts.windows)
        } else {
            mismatches.join("; ")
        },
    );
    Ok(rep)
}

/// Parity law of the eigenvalue `−2` on the path models.
pub fn models_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("models", opts.seed);
    let mut bad = Vec::new();
    for l in 2..=opts.model_l_max {
        let want = usize::from(l % 3 == 1);
        for (i, j, expect) in [(1, 1, want), (1, 2, 0), (2, 2, 0)] {
            let dim = kernel_dim_minus_two(&build_model(l, i, j)?);
            if dim != expect {
                bad.push(format!("l={l} ({i},{j}) dim {dim}"));
            }
        }
    }
    rep.push(
        format!("parity law to l = {}", opts.model_l_max),
        bad.is_empty(),
        if bad.is_empty() { "all rows match".into() } else { bad.join("; ") },
    );
    Ok(rep)
}

fn random_member(group: GroupId, lambda: &[u64], rng: &mut ChaCha8Rng, pool: &[GroupElement]) -> GF2Vector {
    let mut x = GF2Vector::zero();
    for _ in 0..rng.gen_range(1..=20) {
        let g = pool.choose(rng).expect("nonempty");
        let n = *lambda.choose(rng).expect("nonempty");
        x.add_assign(&generator_w(&t_generator(n, group)).translate(g));
    }
    x
}

/// Random members of `V` with certificate replay, single-point perturbations,
/// and rejection of `w_{t_b}` for `b ∉ I`.
pub fn member_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("member", opts.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let lambda_elems = vec![2u64, 5];
    let lambda = IndexSetSpec::explicit(lambda_elems.clone());
    let mut accepted = 0;
    let mut errors = Vec::new();
    let mut perturbed_ok = 0;
    for trial in 0..opts.member_trials {
        let group = groups()[trial % 2];
        let pool = ball(3, group)?;
        let x = random_member(group, &lambda_elems, &mut rng, &pool);
        match is_in_v(&x, &lambda)? {
            Membership::Member { certificate } if verify_certificate(&x, &certificate, &lambda)? => accepted += 1,
            other => errors.push(format!("member rejected or bad certificate: {x} -> {other:?}")),
        }
        let g = if x.is_zero() {
            pool.choose(&mut rng).unwrap().clone()
        } else {
            let near: Vec<GroupElement> = neighborhood(x.support().iter(), 1).into_iter().collect();
            near.choose(&mut rng).unwrap().clone()
        };
        let mut y = x.clone();
        y.toggle(g);
        match is_in_v(&y, &lambda)? {
            Membership::NotMember { .. } => perturbed_ok += 1,
            Membership::Member { certificate } => {
                if verify_certificate(&y, &certificate, &lambda)? {
                    perturbed_ok += 1;
                } else {
                    errors.push(format!("perturbed vector accepted without a valid certificate: {y}"));
                }
            }
        }
    }
    rep.push(
        format!("{} random members accepted with replayable certificates", opts.member_trials),
        accepted == opts.member_trials,
        format!("{accepted} accepted"),
    );
    rep.push("single-point perturbations", perturbed_ok == opts.member_trials, format!("{perturbed_ok} consistent"));
    let mut wrongly = Vec::new();
    for group in groups() {
        for b in 1..=30u64 {
            let v = is_in_v(&generator_w(&t_generator(b, group)), &lambda)?.is_member();
            if v != lambda_elems.contains(&b) {
                wrongly.push(format!("{group} b={b}"));
            }
        }
    }
    rep.push(
        "w_{t_b} in V iff b in I, b <= 30",
        wrongly.is_empty(),
        if wrongly.is_empty() { "all 60 verdicts correct".into() } else { wrongly.join(", ") },
    );
    if !errors.is_empty() {
        errors.truncate(5);
        rep.push("no membership errors", false, errors.join("; "));
    }
    Ok(rep)
}

fn enclosure_string(e: &DimensionEnclosure) -> String {
    format!("[{}, {}]", rational_string(&e.lower), rational_string(&e.upper))
}

/// The two routes for `dim ker(A + 2)` and the single-`U_k` identity.
pub fn route_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("route", opts.seed);
    let b = beta_constants();
    rep.push(
        "printed constants evaluate to 3/261121 and 6144/261121",
        b.beta1 == rational(3, 261121) && b.beta2 == rational(6144, 261121),
        format!("{} and {}", rational_string(&b.beta1), rational_string(&b.beta2)),
    );
    let width_cap = pow2_rational(-200);
    let hook = hook_sum_beta_constants();
    for elems in [vec![2u64], vec![2, 5]] {
        let set = IndexSetSpec::explicit(elems.clone());
        let direct = dimension_direct_sum(&set, 80)?;
        for (label, closed) in
            [("printed constants", dimension_closed_form(&set, 4)?), ("hook-sum constants", dimension_closed_form_with(&set, 4, &hook)?)]
        {
            let ok = closed.intersects(&direct) && closed.width() <= width_cap && direct.width() <= width_cap;
            rep.push(
                format!("routes agree for I = {elems:?} ({label})"),
                ok,
                format!("closed form {} vs direct sum {}", enclosure_string(&closed), enclosure_string(&direct)),
            );
        }
    }
    let cap = pow2_rational(-150);
    for n in [2u64, 5] {
        let direct = u_sum_direct(n, 80)?;
        for (label, value) in [("printed value", u_sum_printed(n)), ("exact value", u_sum_exact(n))] {
            rep.push(
                format!("U_k sum for n_k = {n} ({label})"),
                direct.contains(&value) && direct.width() <= cap,
                format!("{} vs truncated {}", rational_string(&value), enclosure_string(&direct)),
            );
        }
    }
    Ok(rep)
}

/// The tabulated `(F_s(χ), F_{s⁻¹}(s⁻¹χ))` for the classes of `χ` (column) and `s⁻¹χ` (row).
pub fn table_entry(column: LocalClass, row: LocalClass) -> (BigRational, BigRational) {
    use LocalClass::*;
    let (a, b) = match (row, column) {
        (InteriorGood, InteriorGood) => ((1, 1), (1, 1)),
        (InteriorGood, GoodEnd) => ((0, 1), (2, 1)),
        (InteriorGood, OneGoodNotLocallyGood) => ((0, 1), (1, 2)),
        (GoodEnd, InteriorGood) => ((2, 1), (0, 1)),
        (OneGoodNotLocallyGood, InteriorGood) => ((1, 2), (0, 1)),
        _ => ((0, 1), (0, 1)),
    };
    (rational(a.0, a.1), rational(b.0, b.1))
}

/// Hook and segment indicators recentred at each vertex and at each vertex neighbour.
fn table_witnesses(group: GroupId) -> Vec<BTreeSet<GroupElement>> {
    let e = GroupElement::identity(group);
    let mut shapes = Vec::new();
    for n in 1..=3 {
        for m in 1..=3 {
            shapes.push(Hook::new(e.clone(), n, m));
        }
    }
    for len in 1..=4 {
        shapes.push(Hook::vertical(e.clone(), len));
    }
    let mut out = BTreeSet::new();
    for h in shapes {
        let verts = h.vertices();
        for v in &verts {
            for c in std::iter::once(v.clone()).chain(v.neighbors()) {
                let inv = c.inverse();
                out.insert(verts.iter().map(|x| inv.times(x)).collect::<BTreeSet<_>>());
            }
        }
    }
    out.into_iter().collect()
}

struct TableTally {
    realized: BTreeSet<(LocalClass, LocalClass)>,
    checked: usize,
    mismatches: Vec<String>,
}

impl TableTally {
    fn check(&mut self, chi: &Pattern, s: Gen) -> Result<()> {
        let e = GroupElement::identity(chi.group());
        let es = e.mul_gen(s);
        let mut cls = Classifier::new(chi);
        let (col, row) = (cls.class(&e)?, cls.class(&es)?);
        let got = (cls.f_at(&e, s)?, cls.f_at(&es, s.inverse())?);
        self.realized.insert((col, row));
        self.checked += 1;
        if got != table_entry(col, row) {
            self.mismatches.push(format!("{col:?}/{row:?} via {s}: got ({}, {})", got.0, got.1));
        }
        Ok(())
    }
}

/// Constructed witnesses for every class pair plus random completions outside
/// `B(e,1) ∪ sB(e,1)`, each checked against the table.
pub fn table_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("table", opts.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut tally = TableTally { realized: BTreeSet::new(), checked: 0, mismatches: Vec::new() };
    let mut seeds: Vec<(GroupId, BTreeSet<GroupElement>, Gen)> = Vec::new();
    for group in groups() {
        let window = ball(3, group)?;
        let e = GroupElement::identity(group);
        for ones in table_witnesses(group) {
            for flips in 0..3 {
                let mut support: BTreeSet<GroupElement> = ones.iter().filter(|g| window.contains(g)).cloned().collect();
                for _ in 0..flips {
                    let g = window.choose(&mut rng).unwrap().clone();
                    if !support.remove(&g) {
                        support.insert(g);
                    }
                }
                let chi = Pattern::from_support(group, window.iter(), support.iter())?;
                for s in Gen::ALL {
                    tally.check(&chi, s)?;
                    seeds.push((group, support.clone(), s));
                }
            }
        }
        // the all-zero pattern and a bare point
        for support in [BTreeSet::new(), BTreeSet::from([e.clone()])] {
            let chi = Pattern::from_support(group, window.iter(), support.iter())?;
            for s in Gen::ALL {
                tally.check(&chi, s)?;
            }
        }
    }
    let witnessed = tally.realized.clone();
    let mut balls: BTreeMap<GroupId, (Vec<GroupElement>, GroupElement)> = BTreeMap::new();
    for group in groups() {
        balls.insert(group, (ball(3, group)?, GroupElement::identity(group)));
    }
    for _ in 0..opts.completions {
        let (group, support, s) = seeds.choose(&mut rng).unwrap();
        let (window, e) = &balls[group];
        let core = neighborhood([e, &e.mul_gen(*s)], 1);
        let mut ones: Vec<&GroupElement> = support.iter().filter(|g| core.contains(g)).collect();
        for g in window.iter().filter(|g| !core.contains(g)) {
            if rng.gen_ratio(1, 8) {
                ones.push(g);
            }
        }
        let chi = Pattern::from_support(*group, window.iter(), ones)?;
        tally.check(&chi, *s)?;
    }
    let all: BTreeSet<(LocalClass, LocalClass)> =
        LocalClass::ALL.iter().flat_map(|&a| LocalClass::ALL.iter().map(move |&b| (a, b))).collect();
    let missing: Vec<String> = all.difference(&witnessed).map(|(a, b)| format!("{a:?}/{b:?}")).collect();
    rep.push(
        "class pairs realized by witnesses",
        missing.iter().all(|m| m == "GoodEnd/GoodEnd"),
        format!("{} of 16 pairs; missing: {}", witnessed.len(), if missing.is_empty() { "none".into() } else { missing.join(", ") }),
    );
    rep.push(
        "table and transpose law",
        tally.mismatches.is_empty(),
        if tally.mismatches.is_empty() {
            format!("{} evaluations, {} completions, zero mismatches", tally.checked, opts.completions)
        } else {
            tally.mismatches.iter().take(5).cloned().collect::<Vec<_>>().join("; ")
        },
    );
    Ok(rep)
}

/// Totality and consistency of the configuration classifier.
pub fn partition_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("partition", opts.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut bad = Vec::new();
    let trials = 400;
    for trial in 0..trials {
        let group = groups()[trial % 2];
        let e = GroupElement::identity(group);
        let (n, m) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let hook = if rng.gen_bool(0.2) { Hook::vertical(e.clone(), n) } else { Hook::new(e.clone(), n, m) };
        let verts = hook.vertices();
        let centre = verts.choose(&mut rng).unwrap().inverse();
        let window = neighborhood(verts.iter().map(|v| centre.times(v)).collect::<Vec<_>>().iter(), 4);
        let mut support: BTreeSet<GroupElement> = verts.iter().map(|v| centre.times(v)).collect();
        let pool: Vec<GroupElement> = neighborhood(support.iter(), 1).into_iter().collect();
        for _ in 0..rng.gen_range(0..=2) {
            let g = pool.choose(&mut rng).unwrap().clone();
            if !support.remove(&g) {
                support.insert(g);
            }
        }
        let chi = Pattern::from_support(group, window.iter(), support.iter())?;
        let class = classify_configuration(&chi)?;
        if classify_configuration(&chi)? != class {
            bad.push(format!("nondeterministic on trial {trial}"));
        }
        let mut cls = Classifier::new(&chi);
        let mut moves = false;
        for s in Gen::ALL {
            moves |= !cls.g_at(&e, s)?.is_zero();
        }
        let key = match &class {
            ConfigClass::C0 => {
                if moves {
                    bad.push(format!("C0 with a nonzero G_s on trial {trial}"));
                }
                "C0".to_string()
            }
            ConfigClass::Cij { i, j, p, r, psi } => {
                let rv: BTreeSet<GroupElement> = r.vertices().into_iter().collect();
                let pv: BTreeSet<GroupElement> = p.vertices().into_iter().collect();
                let ok = i <= j && moves && rv.contains(&e) && pv.is_subset(&rv) && psi.covers(neighborhood(rv.iter(), 1).iter());
                if !ok {
                    bad.push(format!("inconsistent C{i}{j} on trial {trial}"));
                }
                format!("C{i}{j}")
            }
            ConfigClass::Unresolved { .. } => "unresolved".to_string(),
        };
        *counts.entry(key).or_default() += 1;
    }
    let summary: Vec<String> = counts.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    rep.push(
        format!("{trials} patterns classified exactly once"),
        bad.is_empty(),
        if bad.is_empty() { summary.join(", ") } else { bad.join("; ") },
    );
    Ok(rep)
}

/// Windowed operator on `C₁,₁` hooks against the path models.
pub fn operator_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("operator", opts.seed);
    let mut bad = Vec::new();
    let mut cases = 0;
    let minus_two = rational(-2, 1);
    for group in groups() {
        let e = GroupElement::identity(group);
        for n in 1..=7u32 {
            for m in 1..=(8 - n) {
                cases += 1;
                let hook = Hook::new(e.clone(), n, m);
                let chi = hook.indicator(4);
                let verts = hook.vertices();
                match classify_configuration(&chi.translate(&verts[0].inverse()))? {
                    ConfigClass::Cij { i: 1, j: 1, .. } => {}
                    other => bad.push(format!("({n},{m}) {group}: not C11 but {other:?}")),
                }
                let domain = neighborhood(verts.iter(), 1);
                let op = windowed_operator(&chi, domain.iter())?;
                let l = verts.len() - 1;
                let model = build_model(l, 1, 1)?;
                if op.submatrix(&verts)? != model.shifted_matrix(&BigRational::zero()) {
                    bad.push(format!("({n},{m}) {group}: hook block differs from A^(l,1,1)"));
                }
                let vs: BTreeSet<&GroupElement> = verts.iter().collect();
                let leaks = op.entries.keys().any(|&(a, b)| vs.contains(&op.points[a]) != vs.contains(&op.points[b]));
                if leaks || !op.is_symmetric() {
                    bad.push(format!("({n},{m}) {group}: block structure or symmetry violated"));
                }
                let x = kernel_vector(l, &rational(2, 1), &rational(2, 1))?;
                let shifted = model.shifted_matrix(&minus_two);
                let annihilated = apply(&shifted, &x).iter().all(Zero::is_zero);
                if annihilated != (l % 3 == 1) {
                    bad.push(format!("({n},{m}) {group}: kernel vector mismatch"));
                }
            }
        }
    }
    rep.push(
        format!("{cases} hooks with n+m <= 8"),
        bad.is_empty(),
        if bad.is_empty() { "hook blocks equal the path models".into() } else { bad.join("; ") },
    );
    Ok(rep)
}

/// Digit splitting on random finite digit sets.
pub fn splitting_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("splitting", opts.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut bad = Vec::new();
    for trial in 0..opts.digit_sets {
        let d = 2 + (trial % 4) as u32;
        let count = rng.gen_range(1..=40);
        let digits: BTreeSet<u64> = (0..count).map(|_| rng.gen_range(1..=80)).collect();
        let digits: Vec<u64> = digits.into_iter().collect();
        let parts = split_digits(&digits, d)?;
        let target: ExactDyadic = digits.iter().map(|&n| ExactDyadic::pow2(-(d as i64) * n as i64)).sum();
        let total: ExactDyadic = parts.iter().map(|f| f.value()).sum();
        let well_formed = parts.len() == 1 << (d - 1) && parts.iter().all(|f| f.is_well_formed());
        if !well_formed || total != target {
            bad.push(format!("D={d} digits {digits:?}"));
        }
    }
    rep.push(
        format!("{} digit sets, D in 2..=5", opts.digit_sets),
        bad.is_empty(),
        if bad.is_empty() { "all splits exact".into() } else { bad.join("; ") },
    );
    Ok(rep)
}

/// Window bound for `D_{g,N}` against `2^{−2N}` and Monte-Carlo frequencies.
pub fn nullset_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("nullset", opts.seed);
    let lambda = i2();
    let samples = (opts.samples / 10).max(1);
    for n in 1..=10u32 {
        let bound = dg_bound(n, &lambda)?;
        let cap = ExactDyadic::pow2(-2 * n as i64);
        let mut detail = format!("bound {bound} vs 2^-{}", 2 * n);
        let mut ok = bound <= cap;
        for group in groups() {
            let sys = RelationSystem::new(group, lambda.clone(), dg_window(group, n));
            let sampler = CharacterSampler::new(&sys)?;
            let event = sampler.cylinder_event(&dg_pattern(group, n))?;
            let est = estimate_event_bits(&sampler, event, samples, opts.seed.wrapping_add(n as u64))?;
            let p = cap.to_rational();
            let excess = &est.frequency - &p;
            let sigma2 = &p * (BigRational::from_integer(1.into()) - &p) / BigRational::from_integer(samples.into());
            let within = excess <= BigRational::zero() || &excess * &excess <= sigma2 * rational(16, 1);
            ok &= within;
            detail.push_str(&format!("; {group} {} / {}", est.hits, est.samples));
        }
        rep.push(format!("D_(g,{n})"), ok, detail);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyOptions {
        VerifyOptions {
            samples: 2000,
            completions: 500,
            member_trials: 30,
            model_l_max: 40,
            windows: 6,
            digit_sets: 8,
            ..Default::default()
        }
    }

    #[test]
    fn small_suites_pass() {
        for name in ["counting", "models", "member", "table", "partition", "operator", "splitting", "nullset", "measures"] {
            let r = run_suite(name, &small()).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn route_suite_reports_constants() {
        let r = run_suite("route", &small()).unwrap();
        let by_name: BTreeMap<&str, bool> = r.checks.iter().map(|c| (c.name.as_str(), c.passed)).collect();
        assert!(by_name["printed constants evaluate to 3/261121 and 6144/261121"]);
        assert!(by_name["routes agree for I = [2, 5] (hook-sum constants)"]);
        assert!(by_name["U_k sum for n_k = 5 (exact value)"]);
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope", &small()), Err(Error::Validation(_))));
    }
}

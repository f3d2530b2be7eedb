use std::path::Path;

use l2lab::closure::{parse_binary_fraction, realize_target, truncate};
use l2lab::dimension::{
    beta_constants, dimension_closed_form_with, dimension_direct_sum, hook_sum_beta_constants, BetaConstants, DimensionEnclosure,
};
use l2lab::dyadic::{approx_f64, parse_rational, rational_string};
use l2lab::finite_models::{model_table, model_table_csv};
use l2lab::group::parse_element;
use l2lab::local_rules::Hook;
use l2lab::measure::{
    brute_count_extendable, count_extendable, cylinder_measure, estimate_event_bits, hook_measure, omega_classes, CharacterSampler,
    RelationSystem, BRUTE_MAX_WINDOW,
};
use l2lab::verify::{run_suite, SuiteReport, VerifyOptions, SUITES};
use l2lab::word_problem::{enumerate_relations, is_in_v, word_string, GF2Vector, Membership};
use l2lab::{Error, ExactDyadic, ExactRational, GroupElement, GroupId, IndexSetSpec};
use serde_json::{json, Value};

use crate::output::Format;

pub struct Context {
    pub group: GroupId,
    pub index_set: IndexSetSpec,
    pub seed: u64,
    pub format: Format,
}

pub enum Output {
    Value(Value),
    Text(String),
}

/// Outcome of a command that ran to completion.
pub struct Outcome {
    pub output: Output,
    /// False when a verification reported a failure.
    pub verified: bool,
}

impl Outcome {
    fn ok(v: Value) -> Self {
        Outcome { output: Output::Value(v), verified: true }
    }
}

/// `--index-set` accepts a JSON array, a tagged JSON object, `@path`, or a path to a JSON file.
pub fn parse_index_set(arg: &str) -> l2lab::Result<IndexSetSpec> {
    let text = if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| Error::Validation(format!("cannot read {path}: {e}")))?
    } else if !arg.trim_start().starts_with(['[', '{']) && Path::new(arg).is_file() {
        std::fs::read_to_string(arg).map_err(|e| Error::Validation(format!("cannot read {arg}: {e}")))?
    } else {
        arg.to_string()
    };
    let text = text.trim();
    if text.starts_with('[') {
        let elements: Vec<u64> = serde_json::from_str(text).map_err(|e| Error::Parse(format!("index set: {e}")))?;
        return IndexSetSpec::from_json(&json!({"kind": "explicit", "elements": elements}).to_string());
    }
    IndexSetSpec::from_json(text)
}

fn rat(q: &ExactRational) -> Value {
    Value::String(rational_string(q))
}

fn enclosure(e: &DimensionEnclosure) -> Value {
    json!({
        "lower": rat(&e.lower),
        "upper": rat(&e.upper),
        "width": rat(&e.width()),
        "approx_decimal_lower": format!("{:.6e}", approx_f64(&e.lower)),
    })
}

fn betas(b: &BetaConstants) -> Value {
    json!({"beta1": rat(&b.beta1), "beta2": rat(&b.beta2)})
}

pub fn dim(ctx: &Context, terms: usize, l: u64, hook_sum: bool) -> l2lab::Result<Outcome> {
    let printed = beta_constants();
    let corrected = hook_sum_beta_constants();
    let used = if hook_sum { &corrected } else { &printed };
    let closed = dimension_closed_form_with(&ctx.index_set, terms, used)?;
    let direct = dimension_direct_sum(&ctx.index_set, l)?;
    Ok(Outcome::ok(json!({
        "index_set": serde_json::to_value(&ctx.index_set).unwrap_or(Value::Null),
        "constants": if hook_sum { "hook-sum" } else { "printed" },
        "beta_printed": betas(&printed),
        "beta_hook_sum": betas(&corrected),
        "closed_form": enclosure(&closed),
        "direct_sum": enclosure(&direct),
        "terms": terms,
        "truncation": l,
        "agree": closed.intersects(&direct),
    })))
}

pub fn models(ctx: &Context, l_max: usize) -> l2lab::Result<Outcome> {
    if l_max < 2 {
        return Err(Error::Validation(format!("--l-max must be at least 2, got {l_max}")));
    }
    let rows = model_table(2..=l_max)?;
    let output = match ctx.format {
        Format::Csv => Output::Text(model_table_csv(&rows)),
        Format::Json => Output::Value(json!({ "rows": rows })),
    };
    Ok(Outcome { output, verified: true })
}

fn dyadic(d: &ExactDyadic) -> Value {
    json!({ "value": d.to_string(), "rational": rat(&d.to_rational()) })
}

fn parse_elements(group: GroupId, json_list: &str) -> l2lab::Result<Vec<GroupElement>> {
    let words: Vec<String> =
        serde_json::from_str(json_list).map_err(|e| Error::Parse(format!("expected a JSON list of element strings: {e}")))?;
    words.iter().map(|w| parse_element(group, w)).collect()
}

pub fn measure(ctx: &Context, legs: Option<(u32, u32)>, window: Option<&str>) -> l2lab::Result<Outcome> {
    match (legs, window) {
        (Some((n, m)), None) => {
            let hook = Hook::new(GroupElement::identity(ctx.group), n, m);
            let sys = RelationSystem::for_hook(&hook, ctx.index_set.clone());
            let formula = hook_measure(n, m, &ctx.index_set)?;
            let cylinder = cylinder_measure(&hook.indicator(1), &sys)?;
            Ok(Outcome::ok(json!({
                "group": ctx.group.to_string(),
                "legs": [n, m],
                "window_size": sys.window.len(),
                "k": omega_classes(&sys)?.k(),
                "hook_measure": dyadic(&formula),
                "cylinder_measure": dyadic(&cylinder),
                "agree": formula == cylinder,
            })))
        }
        (None, Some(list)) => {
            let points = parse_elements(ctx.group, list)?;
            let sys = RelationSystem::new(ctx.group, ctx.index_set.clone(), points);
            let k = omega_classes(&sys)?.k();
            let formula = count_extendable(&sys)?;
            let brute = if sys.window.len() <= BRUTE_MAX_WINDOW { Some(brute_count_extendable(&sys)?) } else { None };
            Ok(Outcome::ok(json!({
                "group": ctx.group.to_string(),
                "window_size": sys.window.len(),
                "k": k,
                "count_extendable": dyadic(&formula),
                "brute_force": brute.map(|b| b.to_string()),
                "agree": brute.map(|b| ExactDyadic::from_integer(b) == formula),
            })))
        }
        _ => Err(Error::Validation("give exactly one of --legs or --window".into())),
    }
}

pub fn sample(ctx: &Context, legs: (u32, u32), samples: u64) -> l2lab::Result<Outcome> {
    let (n, m) = legs;
    let hook = Hook::new(GroupElement::identity(ctx.group), n, m);
    let sys = RelationSystem::for_hook(&hook, ctx.index_set.clone());
    let sampler = CharacterSampler::new(&sys)?;
    let event = sampler.cylinder_event(&hook.indicator(1))?;
    let est = estimate_event_bits(&sampler, event, samples, ctx.seed)?;
    let exact = hook_measure(n, m, &ctx.index_set)?;
    let p = exact.to_rational();
    Ok(Outcome::ok(json!({
        "group": ctx.group.to_string(),
        "legs": [n, m],
        "seed": ctx.seed,
        "samples": est.samples,
        "hits": est.hits,
        "frequency": rat(&est.frequency),
        "exact": dyadic(&exact),
        "within_4_sigma": est.within_sigmas(&p, 4),
        "approx_decimal_frequency": format!("{:.6e}", approx_f64(&est.frequency)),
    })))
}

pub fn target(value: &str, precision: u32, d: Option<u32>) -> l2lab::Result<Outcome> {
    let r = if value.contains('/') {
        let q = parse_rational(value)?;
        let scaled = (q * ExactDyadic::pow2(precision as i64).to_rational()).floor();
        ExactDyadic::new(scaled.to_integer(), -(precision as i64))
    } else {
        parse_binary_fraction(value)?
    };
    let goal = truncate(&r, precision);
    let realized = realize_target(&r, precision, d)?;
    let exact = realized.value.is_point() && realized.value.lower == goal.to_rational();
    Ok(Outcome::ok(json!({
        "target": dyadic(&goal),
        "precision": precision,
        "atoms": realized.recipe.atom_count(),
        "value": enclosure(&realized.value),
        "exact": exact,
        "recipe": serde_json::to_value(&realized.recipe).map_err(|e| Error::Internal(e.to_string()))?,
    })))
}

pub fn member(ctx: &Context, vector: &str) -> l2lab::Result<Outcome> {
    let x = GF2Vector::from_points(parse_elements(ctx.group, vector)?);
    let verdict = is_in_v(&x, &ctx.index_set)?;
    let body = match &verdict {
        Membership::Member { certificate } => json!({
            "member": true,
            "certificate": certificate
                .iter()
                .map(|s| json!({"g": word_string(&s.g), "t": word_string(&s.t)}))
                .collect::<Vec<_>>(),
        }),
        Membership::NotMember { rejection, steps_taken } => json!({
            "member": false,
            "rejection": serde_json::to_value(rejection).map_err(|e| Error::Internal(e.to_string()))?,
            "steps_taken": steps_taken,
        }),
    };
    Ok(Outcome::ok(body))
}

pub fn relations(ctx: &Context, count: usize) -> l2lab::Result<Outcome> {
    let rels = enumerate_relations(&ctx.index_set, ctx.group, count)?;
    let rows: Vec<Value> = rels
        .iter()
        .enumerate()
        .map(|(i, r)| json!({"index": i, "family": serde_json::to_value(r.family).unwrap_or(Value::Null), "word": r.word}))
        .collect();
    Ok(Outcome::ok(json!({ "rows": rows })))
}

pub fn verify(suite: &str, opts: &VerifyOptions) -> l2lab::Result<Outcome> {
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    let mut reports: Vec<SuiteReport> = Vec::new();
    for name in names {
        reports.push(run_suite(name, opts)?);
    }
    let verified = reports.iter().all(SuiteReport::passed);
    let rows: Vec<Value> = reports
        .iter()
        .flat_map(|r| r.checks.iter().map(move |c| json!({"suite": r.suite, "check": c.name, "passed": c.passed, "detail": c.detail})))
        .collect();
    Ok(Outcome { output: Output::Value(json!({ "seed": opts.seed, "passed": verified, "rows": rows })), verified })
}

//! The subcommands as functions from a loaded spec to a JSON result.
//!
//! Every command reports through the same JSON value that `--json` prints; the
//! human-readable text is rendered from it by [`crate::render`].

use anyhow::{anyhow, bail, Context, Result};
use finality_core::{
    build_reduction, compare_structures, distinguishable, do_surgery, enumerate_goal_hypotheses, rank_hypotheses,
    Achievability, Dataset, FinalModel, GoalHypothesis, IndependenceStatement, InterventionSpec, Level, MStarModel,
    ProjectionAgreement, RankOptions, RankOutcome, World, WorldTable,
};
use serde_json::{json, Map, Value};

use crate::dsl::ModelSpec;

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub result: Value,
    pub warnings: Vec<String>,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Self {
            result,
            warnings: Vec::new(),
            exit_code: 0,
        }
    }
}

/// The single JSON document printed for one invocation.
pub fn document(command: &str, outcome: Option<&Outcome>, errors: &[String]) -> Value {
    let mut diagnostics: Vec<Value> = errors.iter().map(|m| json!({"level": "error", "message": m})).collect();
    if let Some(o) = outcome {
        diagnostics.extend(o.warnings.iter().map(|m| json!({"level": "warning", "message": m})));
    }
    json!({
        "command": command,
        "result": outcome.map_or(Value::Null, |o| o.result.clone()),
        "diagnostics": diagnostics,
    })
}

pub(crate) fn world_object(columns: &[String], world: &World) -> Value {
    let map: Map<String, Value> = columns
        .iter()
        .zip(world.values())
        .map(|(c, &l)| (c.clone(), Value::from(l)))
        .collect();
    Value::Object(map)
}

fn table_fields(table: &WorldTable, into: &mut Map<String, Value>) {
    into.insert("columns".into(), json!(table.columns()));
    let worlds = table.worlds().iter().map(|w| world_object(table.columns(), w)).collect();
    into.insert("worlds".into(), Value::Array(worlds));
}

fn object(value: Value) -> Map<String, Value> {
    match value {
        Value::Object(map) => map,
        _ => unreachable!("json! object literal"),
    }
}

fn statement_fields(s: &IndependenceStatement, into: &mut Map<String, Value>) {
    into.insert("x".into(), json!(s.x()));
    into.insert("y".into(), json!(s.y()));
    into.insert("given".into(), json!(s.given()));
}

fn independence_word(independent: bool) -> &'static str {
    if independent {
        "independent"
    } else {
        "dependent"
    }
}

pub fn worlds(spec: &ModelSpec) -> Outcome {
    let mut result = Map::new();
    table_fields(&spec.scm().enumerate_worlds(), &mut result);
    Outcome::ok(Value::Object(result))
}

fn mstar_for(spec: &ModelSpec, target: Option<&str>) -> Result<MStarModel> {
    match (target, spec.mstar()) {
        (Some(t), _) => Ok(do_surgery(spec.scm(), InterventionSpec::new(t))?),
        (None, Some(m)) => Ok(m.clone()),
        (None, None) => bail!("no intervention: pass --do or declare `do` in the spec"),
    }
}

pub fn intervene(spec: &ModelSpec, target: Option<&str>) -> Result<Outcome> {
    let m = mstar_for(spec, target)?;
    let mut result = object(json!({ "do": m.target_name() }));
    table_fields(&m.enumerate_worlds(), &mut result);
    Ok(Outcome::ok(Value::Object(result)))
}

fn final_named<'a>(spec: &'a ModelSpec, name: &str) -> Result<&'a FinalModel> {
    spec.final_model(name).ok_or_else(|| {
        let known: Vec<&str> = spec.finals().iter().map(|f| f.name.as_str()).collect();
        if known.is_empty() {
            anyhow!("no final model named `{name}`; the spec declares none")
        } else {
            anyhow!("no final model named `{name}`; declared: {}", known.join(", "))
        }
    })
}

pub fn finalize(spec: &ModelSpec, name: &str) -> Result<Outcome> {
    let f = final_named(spec, name)?;
    let compatible = f.compatible_worlds();
    let mut result = object(json!({
        "final": name,
        "do": f.action(),
        "effects": f.intended_effects(),
        "goal": f.goal().to_string(),
    }));
    table_fields(&compatible, &mut result);
    let dependencies = f
        .implied_dependencies()
        .into_iter()
        .map(|r| {
            let mut d = Map::new();
            statement_fields(&r.statement, &mut d);
            d.insert(
                "graph".into(),
                json!(if r.graphically_separated { "separated" } else { "connected" }),
            );
            d.insert(
                "distribution".into(),
                r.distributionally_independent.map_or(Value::Null, |i| json!(independence_word(i))),
            );
            let verdict = match r.distributionally_independent {
                None => "undetermined",
                Some(i) if i == r.graphically_separated => "expected",
                Some(true) => "unfaithful",
                Some(false) => "unexpected",
            };
            d.insert("verdict".into(), json!(verdict));
            Value::Object(d)
        })
        .collect();
    result.insert("dependencies".into(), Value::Array(dependencies));
    let mut out = Outcome::ok(Value::Object(result));
    if compatible.is_empty() {
        out.warnings
            .push(format!("goal `{}` is unreachable: no intervened world satisfies it", f.goal()));
    }
    Ok(out)
}

pub fn distinguish(spec: &ModelSpec, a: &str, b: &str) -> Result<Outcome> {
    let fa = final_named(spec, a)?;
    let fb = final_named(spec, b)?;
    let d = distinguishable(fa, fb)?;
    let in_a = fa.compatible_worlds();
    let columns = in_a.columns().to_vec();
    let witnesses: Vec<Value> = d
        .witnesses
        .iter()
        .map(|w| json!({"world": world_object(&columns, w), "in": if in_a.contains(w) { a } else { b }}))
        .collect();
    Ok(Outcome::ok(json!({
        "a": a,
        "b": b,
        "distinguishable": d.distinguishable,
        "columns": columns,
        "witnesses": witnesses,
    })))
}

#[derive(Debug, Clone, Copy, Default)]
pub struct IdentifyOptions {
    /// Rank generated goal hypotheses instead of the spec's final models.
    pub enumerate: bool,
    pub max_effects: Option<usize>,
    pub rank: RankOptions,
}

pub fn identify(spec: &ModelSpec, data: &Dataset, opts: IdentifyOptions) -> Result<Outcome> {
    let (m, labels, hypotheses): (MStarModel, Vec<String>, Vec<GoalHypothesis>) = if opts.enumerate {
        let m = mstar_for(spec, None)?;
        let hyps = enumerate_goal_hypotheses(&m, opts.max_effects.unwrap_or(1), None)?;
        let labels = (1..=hyps.len()).map(|i| format!("h{i}")).collect();
        (m, labels, hyps)
    } else {
        if opts.max_effects.is_some() {
            bail!("--max-effects only applies with --enumerate");
        }
        if spec.finals().is_empty() {
            bail!("the spec declares no final models; pass --enumerate to generate hypotheses");
        }
        let m = mstar_for(spec, None)?;
        let labels = spec.finals().iter().map(|f| f.name.clone()).collect();
        let hyps = spec.finals().iter().map(|f| f.model.hypothesis()).collect();
        (m, labels, hyps)
    };
    if hypotheses.is_empty() {
        bail!("no goal hypothesis reaches any intervened world");
    }
    let ranking = rank_hypotheses(&m, &hypotheses, data, &opts.rank).context("ranking hypotheses")?;

    let columns = data.columns().to_vec();
    let mut warnings = Vec::new();
    let entries: Vec<Value> = ranking
        .entries
        .iter()
        .enumerate()
        .map(|(rank, e)| {
            let v = &e.verdict;
            let h = &hypotheses[v.hypothesis];
            let checks: Vec<Value> = v
                .dependence_checks
                .iter()
                .map(|c| {
                    if !c.skipped_strata.is_empty() {
                        warnings.push(format!(
                            "{}: {} skipped {} unobserved conditioning stratum(s)",
                            labels[v.hypothesis],
                            c.statement,
                            c.skipped_strata.len()
                        ));
                    }
                    let mut d = Map::new();
                    statement_fields(&c.statement, &mut d);
                    d.insert("expected".into(), json!(independence_word(c.expected_independent)));
                    d.insert("observed".into(), json!(independence_word(c.observed_independent)));
                    d.insert("agree".into(), json!(c.agree()));
                    d.insert("skipped_strata".into(), json!(c.skipped_strata));
                    Value::Object(d)
                })
                .collect();
            json!({
                "rank": rank + 1,
                "label": labels[v.hypothesis],
                "effects": h.effects,
                "goal": h.goal.to_string(),
                "compatible": v.compatible,
                "compatible_worlds": v.compatible_world_count,
                "class": e.class + 1,
                "violating_rows": v.violating_rows.iter()
                    .map(|(w, n)| json!({"world": world_object(&columns, w), "count": n}))
                    .collect::<Vec<_>>(),
                "dependence_checks": checks,
            })
        })
        .collect();

    let (outcome, best, exit_code) = match &ranking.outcome {
        RankOutcome::Unique(i) => ("unique", vec![labels[*i].clone()], 0),
        RankOutcome::NoneCompatible => ("none-compatible", Vec::new(), 2),
        RankOutcome::Tied(is) => ("tied", is.iter().map(|&i| labels[i].clone()).collect(), 3),
    };
    Ok(Outcome {
        result: json!({
            "hypotheses": if opts.enumerate { "enumerated" } else { "declared" },
            "observations": data.total(),
            "distinct_rows": data.distinct_rows(),
            "columns": columns,
            "outcome": outcome,
            "best": best,
            "ranking": entries,
        }),
        warnings,
        exit_code,
    })
}

pub fn reduce(spec: &ModelSpec, name: &str, rest: Option<Level>) -> Result<Outcome> {
    let f = final_named(spec, name)?;
    let rest = rest.or_else(|| spec.rest_level(f.action()));
    let r = build_reduction(f, rest)?;
    let diff = compare_structures(f, &r)?;
    let mut result = object(json!({
        "final": name,
        "do": f.action(),
        "rest": r.rest_level(),
    }));
    table_fields(&r.enumerate_worlds(), &mut result);
    let achievability = match diff.achievability {
        Achievability::UniqueEverywhere => "unique-everywhere",
        Achievability::MultipleSomewhere => "multiple-somewhere",
        Achievability::UnachievableSomewhere => "unachievable-somewhere",
    };
    let projection = match diff.projection {
        ProjectionAgreement::Equal => "equal",
        ProjectionAgreement::Subset => "subset",
        ProjectionAgreement::Differs => "differs",
    };
    let disagreements: Vec<Value> = diff
        .independence_disagreements
        .iter()
        .map(|d| {
            let mut o = Map::new();
            statement_fields(&d.statement, &mut o);
            o.insert("separated_in_final".into(), json!(d.separated_in_final));
            o.insert("separated_in_reduction".into(), json!(d.separated_in_reduction));
            Value::Object(o)
        })
        .collect();
    let extra = json!({
        "observables": f.final_dag().nodes(),
        "achievability": achievability,
        "projection": projection,
        "final_action_parents": diff.final_action_parents,
        "reduction_action_parents": diff.reduction_action_parents,
        "reduction_action_constant": diff.reduction_action_constant,
        "only_in_final": diff.only_in_final,
        "only_in_reduction": diff.only_in_reduction,
        "independence_disagreements": disagreements,
    });
    result.extend(object(extra));
    Ok(Outcome::ok(Value::Object(result)))
}

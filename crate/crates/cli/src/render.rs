//! Human-readable text for a command's JSON result.
//!
//! The text is produced only from the JSON, so a saved `--json` document
//! reprints exactly what the command showed.

use std::fmt::Write;

use anyhow::{anyhow, bail, Result};
use serde_json::Value;

use crate::table::render as render_table;

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| anyhow!("result has no `{key}` field"))
}

fn string<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    field(v, key)?.as_str().ok_or_else(|| anyhow!("`{key}` is not a string"))
}

fn array<'a>(v: &'a Value, key: &str) -> Result<&'a [Value]> {
    field(v, key)?
        .as_array()
        .map(Vec::as_slice)
        .ok_or_else(|| anyhow!("`{key}` is not an array"))
}

fn boolean(v: &Value, key: &str) -> Result<bool> {
    field(v, key)?.as_bool().ok_or_else(|| anyhow!("`{key}` is not a boolean"))
}

fn strings(v: &Value, key: &str) -> Result<Vec<String>> {
    array(v, key)?
        .iter()
        .map(|s| s.as_str().map(String::from).ok_or_else(|| anyhow!("`{key}` holds a non-string")))
        .collect()
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn world_cells(columns: &[String], world: &Value) -> Result<Vec<String>> {
    columns
        .iter()
        .map(|c| world.get(c).map(scalar).ok_or_else(|| anyhow!("world lacks column `{c}`")))
        .collect()
}

fn world_tuple(columns: &[String], world: &Value) -> Result<String> {
    Ok(format!("({})", world_cells(columns, world)?.join(",")))
}

/// The table held in a result's `columns` and `worlds` fields.
pub fn world_table(result: &Value) -> Result<String> {
    let columns = strings(result, "columns")?;
    let rows = array(result, "worlds")?
        .iter()
        .map(|w| world_cells(&columns, w))
        .collect::<Result<Vec<_>>>()?;
    Ok(render_table(&columns, &rows))
}

fn statement(v: &Value) -> Result<String> {
    let mut s = format!("{} and {}", string(v, "x")?, string(v, "y")?);
    let given = strings(v, "given")?;
    if !given.is_empty() {
        let _ = write!(s, " given {}", given.join(", "));
    }
    Ok(s)
}

fn edge_list(v: &Value, key: &str) -> Result<String> {
    let edges = array(v, key)?;
    if edges.is_empty() {
        return Ok("none".into());
    }
    let parts = edges
        .iter()
        .map(|e| match e.as_array().map(Vec::as_slice) {
            Some([Value::String(a), Value::String(b)]) => Ok(format!("{a} -> {b}")),
            _ => Err(anyhow!("`{key}` holds a malformed edge")),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(parts.join(", "))
}

pub fn human(command: &str, result: &Value) -> Result<String> {
    match command {
        "worlds" | "intervene" => world_table(result),
        "finalize" => finalize(result),
        "distinguish" => distinguish(result),
        "identify" => identify(result),
        "reduce" => reduce(result),
        other => bail!("unknown command `{other}`"),
    }
}

fn finalize(result: &Value) -> Result<String> {
    let mut out = world_table(result)?;
    out.push('\n');
    for d in array(result, "dependencies")? {
        let verdict = string(d, "verdict")?;
        match field(d, "distribution")?.as_str() {
            Some(dist) => writeln!(out, "{}: {dist} ({verdict})", statement(d)?)?,
            None => writeln!(out, "{}: {verdict}", statement(d)?)?,
        }
    }
    Ok(out)
}

fn distinguish(result: &Value) -> Result<String> {
    let (a, b) = (string(result, "a")?, string(result, "b")?);
    if !boolean(result, "distinguishable")? {
        return Ok(format!("{a} and {b}: indistinguishable (same compatible worlds)\n"));
    }
    let mut out = format!("{a} and {b}: distinguishable\n");
    let mut columns = strings(result, "columns")?;
    let rows = array(result, "witnesses")?
        .iter()
        .map(|w| {
            let mut cells = world_cells(&columns, field(w, "world")?)?;
            let owner = string(w, "in")?;
            cells.push(if owner == a { "V" } else { "-" }.into());
            cells.push(if owner == b { "V" } else { "-" }.into());
            Ok(cells)
        })
        .collect::<Result<Vec<_>>>()?;
    columns.extend([a.to_string(), b.to_string()]);
    out.push_str(&render_table(&columns, &rows));
    Ok(out)
}

fn identify(result: &Value) -> Result<String> {
    let columns = strings(result, "columns")?;
    let header = ["rank", "hypothesis", "effects", "goal", "compatible", "worlds", "class", "violations", "checks"]
        .map(String::from)
        .to_vec();
    let ranking = array(result, "ranking")?;
    let mut rows = Vec::new();
    let mut details = String::new();
    for e in ranking {
        let label = string(e, "label")?;
        let violating = array(e, "violating_rows")?;
        let checks = array(e, "dependence_checks")?;
        let agreeing = checks
            .iter()
            .map(|c| boolean(c, "agree"))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|&a| a)
            .count();
        rows.push(vec![
            scalar(field(e, "rank")?),
            label.to_string(),
            strings(e, "effects")?.join(","),
            string(e, "goal")?.to_string(),
            if boolean(e, "compatible")? { "yes" } else { "no" }.to_string(),
            scalar(field(e, "compatible_worlds")?),
            scalar(field(e, "class")?),
            violating.len().to_string(),
            if checks.is_empty() {
                "-".to_string()
            } else {
                format!("{agreeing}/{}", checks.len())
            },
        ]);
        for v in violating {
            writeln!(
                details,
                "{label}: observed {} x{} lies outside its worlds",
                world_tuple(&columns, field(v, "world")?)?,
                scalar(field(v, "count")?)
            )?;
        }
        for c in checks.iter().filter(|c| c.get("agree") == Some(&Value::Bool(false))) {
            writeln!(
                details,
                "{label}: {} expected {}, observed {}",
                statement(c)?,
                string(c, "expected")?,
                string(c, "observed")?
            )?;
        }
    }
    let mut out = format!(
        "{} observations, {} distinct rows over ({})\n\n",
        scalar(field(result, "observations")?),
        scalar(field(result, "distinct_rows")?),
        columns.join(",")
    );
    out.push_str(&render_table(&header, &rows));
    out.push('\n');
    let best = strings(result, "best")?;
    match string(result, "outcome")? {
        "unique" => writeln!(out, "unique most specific compatible hypothesis: {}", best.join(", "))?,
        "tied" => writeln!(out, "tied: {}", best.join(", "))?,
        _ => writeln!(out, "no compatible hypothesis")?,
    }
    if !details.is_empty() {
        out.push('\n');
        out.push_str(&details);
    }
    Ok(out)
}

fn reduce(result: &Value) -> Result<String> {
    let mut out = world_table(result)?;
    out.push('\n');
    let achievability = match string(result, "achievability")? {
        "unique-everywhere" => "exactly one action level reaches the goal in every context",
        "multiple-somewhere" => "several action levels reach the goal in some context",
        _ => "the goal is out of reach in some context",
    };
    writeln!(out, "achievability: {achievability}")?;
    let projection = match string(result, "projection")? {
        "equal" => "equal to",
        "subset" => "a strict subset of",
        _ => "different from",
    };
    writeln!(
        out,
        "projection onto ({}): {projection} the compatible worlds",
        strings(result, "observables")?.join(",")
    )?;
    let action = string(result, "do")?;
    let listed = |key: &str| -> Result<String> {
        let ps = strings(result, key)?;
        Ok(if ps.is_empty() { "nothing".into() } else { ps.join(", ") })
    };
    let reduction_side = if boolean(result, "reduction_action_constant")? {
        format!("nothing, {action} is constant")
    } else {
        listed("reduction_action_parents")?
    };
    writeln!(
        out,
        "{action} listens to: {} in the final model, {reduction_side} in the reduction",
        listed("final_action_parents")?
    )?;
    writeln!(out, "edges only in the final model: {}", edge_list(result, "only_in_final")?)?;
    writeln!(out, "edges only in the reduction: {}", edge_list(result, "only_in_reduction")?)?;
    let disagreements = array(result, "independence_disagreements")?;
    if disagreements.is_empty() {
        writeln!(out, "separation disagreements: none")?;
    } else {
        writeln!(out, "separation disagreements:")?;
        let word = |sep: bool| if sep { "separated" } else { "connected" };
        for d in disagreements {
            writeln!(
                out,
                "  {}: {} in the final model, {} in the reduction",
                statement(d)?,
                word(boolean(d, "separated_in_final")?),
                word(boolean(d, "separated_in_reduction")?)
            )?;
        }
    }
    Ok(out)
}

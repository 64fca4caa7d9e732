//! Observation files: comma-separated levels under a header of variable names.
//!
//! ```text
//! # two observed worlds
//! W,H,T,B,count
//! 0,1,1,1,3
//! 1,0,1,0,2
//! ```
//!
//! The trailing `count` column is optional; without it each line counts once.
//! Lines starting with `#` are comments. Duplicate rows are aggregated.

use finality_core::{Dataset, Level, Scm};

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("{0}")]
    Model(#[from] finality_core::Error),
}

fn parse_err(line: u64, message: impl Into<String>) -> DatasetError {
    DatasetError::Parse {
        line,
        message: message.into(),
    }
}

/// Reads a dataset and binds it to `scm`: columns are reordered to the model's
/// declaration order and every level is checked against its domain.
pub fn load_dataset(text: &str, scm: &Scm) -> Result<Dataset, DatasetError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());

    let header = reader.headers().map_err(|e| parse_err(line_of(&e), e.to_string()))?.clone();
    let header_line = header.position().map_or(1, csv::Position::line);
    let mut names: Vec<String> = header.iter().map(str::to_string).collect();
    if names.iter().all(String::is_empty) {
        return Err(parse_err(header_line, "missing header row"));
    }
    let counted = names.last().is_some_and(|n| n == "count");
    if counted {
        names.pop();
    }
    let mut vars = Vec::with_capacity(names.len());
    for (i, name) in names.iter().enumerate() {
        let Ok(v) = scm.index_of(name) else {
            return Err(parse_err(header_line, format!("unknown variable `{name}`")));
        };
        if names[..i].contains(name) {
            return Err(parse_err(header_line, format!("column `{name}` appears twice")));
        }
        vars.push(scm.variable(v));
    }
    let missing: Vec<&str> = scm
        .variables()
        .iter()
        .map(|v| v.name())
        .filter(|n| !names.iter().any(|c| c == n))
        .collect();
    if !missing.is_empty() {
        return Err(parse_err(header_line, format!("missing columns for {}", missing.join(", "))));
    }

    let width = names.len() + usize::from(counted);
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| parse_err(line_of(&e), e.to_string()))?;
        let line = record.position().map_or(0, csv::Position::line);
        if record.len() != width {
            return Err(parse_err(line, format!("expected {width} fields, found {}", record.len())));
        }
        let mut levels = Vec::with_capacity(vars.len());
        for (field, var) in record.iter().zip(&vars) {
            let level: Level = field
                .parse()
                .map_err(|_| parse_err(line, format!("`{field}` is not an integer level of `{}`", var.name())))?;
            if !var.contains(level) {
                return Err(parse_err(line, format!("level {level} is outside the domain of `{}`", var.name())));
            }
            levels.push(level);
        }
        let count = if counted {
            let field = &record[width - 1];
            match field.parse::<u64>() {
                Ok(n) if n > 0 => n,
                _ => return Err(parse_err(line, format!("count `{field}` must be a positive integer"))),
            }
        } else {
            1
        };
        rows.push((levels, count));
    }
    if rows.is_empty() {
        return Err(parse_err(header_line, "no observations after the header"));
    }
    Ok(Dataset::new(names, rows)?.bind(scm)?)
}

fn line_of(e: &csv::Error) -> u64 {
    e.position().map_or(0, csv::Position::line)
}

//! The `.tele` model-spec language.
//!
//! One statement per line, `#` starts a comment:
//!
//! ```text
//! var W in 0..1
//! var T in 0..2
//! var B in {0, 1}
//! edge W -> T
//! edge T -> B
//! mech T = sum(W, H)
//! mech B = table { (0)->0; (1)->1; (2)->1 }
//! do H
//! rest H = 0
//! final warm { effects: T; goal: T = 1 }
//! ```
//!
//! `table { ... }` keys follow the child's graph parents in declaration order;
//! `table(H, W) { ... }` names the key order explicitly. Braced blocks may span
//! several lines, with newlines acting like `;`.

mod build;
mod lexer;
mod parser;

use std::fmt;

use finality_core::{CmpOp, Level};

pub use build::{load_model, FinalSpec, ModelSpec};
pub use parser::parse_model;

/// A position in the source text, 1-based, columns counted in characters.
///
/// Locations never take part in equality, so a printed and reparsed document
/// compares equal to the original.
#[derive(Debug, Clone, Copy, Default, Eq)]
pub struct Loc {
    pub line: usize,
    pub column: usize,
}

impl PartialEq for Loc {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    Duplicate,
    Undeclared,
    NonTotal,
    Cycle,
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{loc}: {message}")]
pub struct SpecError {
    pub kind: ErrorKind,
    pub loc: Loc,
    pub message: String,
}

impl SpecError {
    pub(crate) fn new(kind: ErrorKind, loc: Loc, message: impl Into<String>) -> Self {
        Self {
            kind,
            loc,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Domain {
    /// `lo..hi`, both ends included.
    Range(Level, Level),
    Set(Vec<Level>),
}

impl Domain {
    pub fn levels(&self) -> Vec<Level> {
        match self {
            Domain::Range(lo, hi) => (*lo..=*hi).collect(),
            Domain::Set(levels) => levels.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub key: Vec<Level>,
    pub value: Level,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MechExpr {
    Sum(Vec<String>),
    Table { parents: Option<Vec<String>>, rows: Vec<Row> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Goal {
    pub variable: String,
    pub op: CmpOp,
    pub level: Level,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Var { name: String, domain: Domain, loc: Loc },
    Edge { from: String, to: String, loc: Loc },
    Mech { child: String, expr: MechExpr, loc: Loc },
    Do { target: String, loc: Loc },
    Rest { variable: String, level: Level, loc: Loc },
    Final { name: String, effects: Vec<String>, goal: Vec<Goal>, loc: Loc },
}

impl Statement {
    pub fn loc(&self) -> Loc {
        match self {
            Statement::Var { loc, .. }
            | Statement::Edge { loc, .. }
            | Statement::Mech { loc, .. }
            | Statement::Do { loc, .. }
            | Statement::Rest { loc, .. }
            | Statement::Final { loc, .. } => *loc,
        }
    }
}

/// A parsed spec, statements in source order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Document {
    pub statements: Vec<Statement>,
}

fn list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Range(lo, hi) => write!(f, "{lo}..{hi}"),
            Domain::Set(levels) => {
                f.write_str("{")?;
                list(f, levels)?;
                f.write_str("}")
            }
        }
    }
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.variable, self.op.symbol(), self.level)
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Var { name, domain, .. } => write!(f, "var {name} in {domain}"),
            Statement::Edge { from, to, .. } => write!(f, "edge {from} -> {to}"),
            Statement::Mech { child, expr, .. } => {
                write!(f, "mech {child} = ")?;
                match expr {
                    MechExpr::Sum(args) => {
                        f.write_str("sum(")?;
                        list(f, args)?;
                        f.write_str(")")
                    }
                    MechExpr::Table { parents, rows } => {
                        f.write_str("table")?;
                        if let Some(parents) = parents {
                            f.write_str("(")?;
                            list(f, parents)?;
                            f.write_str(")")?;
                        }
                        f.write_str(" {")?;
                        for (i, row) in rows.iter().enumerate() {
                            f.write_str(if i == 0 { " (" } else { "; (" })?;
                            list(f, &row.key)?;
                            write!(f, ")->{}", row.value)?;
                        }
                        f.write_str(" }")
                    }
                }
            }
            Statement::Do { target, .. } => write!(f, "do {target}"),
            Statement::Rest { variable, level, .. } => write!(f, "rest {variable} = {level}"),
            Statement::Final { name, effects, goal, .. } => {
                write!(f, "final {name} {{ effects: ")?;
                list(f, effects)?;
                f.write_str("; goal: ")?;
                for (i, g) in goal.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" & ")?;
                    }
                    write!(f, "{g}")?;
                }
                f.write_str(" }")
            }
        }
    }
}

/// Canonical text: one statement per line.
impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

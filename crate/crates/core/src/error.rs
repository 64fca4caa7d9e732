use alloc::string::String;
use alloc::vec::Vec;

use crate::model::Level;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("variable `{0}` is not declared")]
    UnknownVariable(String),
    #[error("variable `{0}` is declared more than once")]
    DuplicateVariable(String),
    #[error("variable `{name}` needs at least two levels, got {count}")]
    TooFewLevels { name: String, count: usize },
    #[error("levels of `{0}` must be strictly increasing")]
    UnorderedDomain(String),
    #[error("level {level} is outside the domain of `{var}`")]
    OutOfDomain { var: String, level: Level },
    #[error("edge `{0} -> {0}` is a self-loop")]
    SelfLoop(String),
    #[error("edge `{0} -> {1}` is declared more than once")]
    DuplicateEdge(String, String),
    #[error("the graph has a cycle through `{0}`")]
    Cycle(String),
    #[error("endogenous variable `{0}` has no mechanism")]
    MissingMechanism(String),
    #[error("exogenous variable `{0}` must not have a mechanism")]
    UnexpectedMechanism(String),
    #[error("mechanism for `{0}` is declared more than once")]
    DuplicateMechanism(String),
    #[error("mechanism parents of `{child}` ({found:?}) differ from its graph parents ({expected:?})")]
    MechanismParents {
        child: String,
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("mechanism for `{child}` is not defined for parent values {inputs:?}")]
    NonTotalMechanism { child: String, inputs: Vec<Level> },
    #[error("mechanism for `{child}` has a row of width {found}, expected {expected}")]
    MechanismArity {
        child: String,
        expected: usize,
        found: usize,
    },
    #[error("statement must relate two distinct variables outside the conditioning set")]
    InvalidStatement,
    #[error("probabilities are undefined over an empty set of worlds")]
    DegenerateDistribution,
    #[error("`{var}` is not a causal effect of `{action}`")]
    NotAnEffect { action: String, var: String },
    #[error("intended effects must not be empty")]
    NoIntendedEffects,
    #[error("goal mentions `{0}`, which is not an intended effect")]
    GoalOutsideEffects(String),
    #[error("goal predicate needs at least one comparison")]
    EmptyGoal,
    #[error("goal `{0}` cannot be satisfied by any combination of levels")]
    UnsatisfiableGoal(String),
    #[error("hypotheses are built over different intervened models")]
    MismatchedModels,
    #[error("enumeration needs {required} candidates, budget is {cap}")]
    BudgetExceeded { required: usize, cap: usize },
    #[error("max_effects must be at least 1")]
    ZeroMaxEffects,
    #[error("dataset columns {found:?} do not match model variables {expected:?}")]
    Binding {
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("dataset row has {found} values for {expected} columns")]
    RowWidth { expected: usize, found: usize },
    #[error("dataset row counts must be positive")]
    ZeroCount,
    #[error("dataset has no observations")]
    EmptyDataset,
    #[error("no candidate hypotheses to rank")]
    NoCandidates,
    #[error("cannot build reduction: {0}")]
    DegenerateReduction(String),
}

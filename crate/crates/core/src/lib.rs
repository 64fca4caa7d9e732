//! Discrete structural causal models and the final models built on top of them.
//!
//! A [`Scm`] enumerates its possible worlds. [`do_surgery`] frees one variable from
//! its causes, producing an [`MStarModel`]. A [`FinalModel`] tags that intervention
//! with intended effects and a goal predicate: the goal filters worlds, and the
//! arrows from the action to its intended effects are reversed. Observational data
//! can then be confronted with competing goal hypotheses ([`rank_hypotheses`]), and
//! a final model can be rewritten as a purely causal model with an explicit
//! intention node ([`build_reduction`]).
//!
//! Every probability comparison is exact; worlds are weighted uniformly.
#![no_std]

extern crate alloc;

mod dsep;
mod error;
#[cfg(test)]
mod fixtures;
mod identification;
mod independence;
mod intervention;
mod model;
mod reduction;
mod teleology;

pub use dsep::d_separated;
pub use error::{Error, Result};
pub use identification::{
    check_dependence, check_support, rank_final_models, rank_hypotheses, CheckSelection, Dataset,
    DependenceCheck, IdentificationVerdict, RankOptions, RankOutcome, RankedVerdict, Ranking,
};
pub use independence::{conditional_distribution, uniform_independent, Probability};
pub use intervention::{
    do_surgery, enumerate_worlds_star, interventional_distribution, InterventionSpec, MStarModel,
};
pub use model::{
    enumerate_worlds, CausalDag, IndependenceStatement, Level, Mechanism, Scm, ScmBuilder,
    Variable, World, WorldTable,
};
pub use reduction::{
    build_reduction, compare_structures, Achievability, IndependenceDisagreement,
    ProjectionAgreement, Provenance, ReductionModel, StructuralDiff,
};
pub use teleology::{
    build_final_model, distinguishable, enumerate_goal_hypotheses, CmpOp, Comparison,
    DependenceReport, Distinguishability, FinalModel, GoalHypothesis, GoalPredicate,
    DEFAULT_CANDIDATE_CAP,
};

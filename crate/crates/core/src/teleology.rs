//! Final models: an intervention tagged with intended effects and a goal.
//!
//! The goal filters the intervened worlds; a world survives iff the goal holds in
//! it, which implicitly picks the action levels that bring the goal about. In the
//! final graph the action "listens" to its intended effects: arrows from the
//! action to those effects are reversed, and an intended effect that is not a
//! direct child gets a new arrow into the action.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::dsep::d_separated;
use crate::error::{Error, Result};
use crate::independence::uniform_independent;
use crate::intervention::MStarModel;
use crate::model::{for_each_assignment, CausalDag, IndependenceStatement, Level, Scm, World, WorldTable};

/// Cap on [`enumerate_goal_hypotheses`] when the caller does not pick one.
pub const DEFAULT_CANDIDATE_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn holds(self, lhs: Level, rhs: Level) -> bool {
        match self {
            CmpOp::Eq => lhs == rhs,
            CmpOp::Ne => lhs != rhs,
            CmpOp::Lt => lhs < rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Gt => lhs > rhs,
            CmpOp::Ge => lhs >= rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

/// `variable op level`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Comparison {
    pub variable: String,
    pub op: CmpOp,
    pub level: Level,
}

impl Comparison {
    pub fn new(variable: impl Into<String>, op: CmpOp, level: Level) -> Self {
        Self {
            variable: variable.into(),
            op,
            level,
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.variable, self.op.symbol(), self.level)
    }
}

/// A conjunction of comparisons.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GoalPredicate {
    conjuncts: Vec<Comparison>,
}

impl GoalPredicate {
    pub fn new(conjuncts: Vec<Comparison>) -> Result<Self> {
        if conjuncts.is_empty() {
            return Err(Error::EmptyGoal);
        }
        Ok(Self { conjuncts })
    }

    pub fn single(variable: impl Into<String>, op: CmpOp, level: Level) -> Self {
        Self {
            conjuncts: alloc::vec![Comparison::new(variable, op, level)],
        }
    }

    pub fn conjuncts(&self) -> &[Comparison] {
        &self.conjuncts
    }

    /// Referenced variables, first mention first.
    pub fn variables(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for c in &self.conjuncts {
            if !out.contains(&c.variable.as_str()) {
                out.push(&c.variable);
            }
        }
        out
    }

    pub fn and(mut self, extra: Comparison) -> Self {
        self.conjuncts.push(extra);
        self
    }

    /// Checks that every variable exists and some combination of domain levels
    /// satisfies the conjunction.
    pub fn validate(&self, scm: &Scm) -> Result<()> {
        let vars = self.variables();
        let idx = vars
            .iter()
            .map(|v| scm.index_of(v))
            .collect::<Result<Vec<_>>>()?;
        let domains: Vec<&[Level]> = idx.iter().map(|&i| scm.variable(i).domain()).collect();
        let resolved = self.resolve_against(|name| vars.iter().position(|v| *v == name))?;
        let mut satisfiable = false;
        for_each_assignment(&domains, |levels| {
            satisfiable |= resolved.holds(levels);
        });
        if satisfiable {
            Ok(())
        } else {
            Err(Error::UnsatisfiableGoal(self.to_string()))
        }
    }

    pub(crate) fn resolve(&self, columns: &[String]) -> Result<ResolvedGoal> {
        self.resolve_against(|name| columns.iter().position(|c| c == name))
    }

    fn resolve_against(&self, lookup: impl Fn(&str) -> Option<usize>) -> Result<ResolvedGoal> {
        let atoms = self
            .conjuncts
            .iter()
            .map(|c| {
                lookup(&c.variable)
                    .map(|i| (i, c.op, c.level))
                    .ok_or_else(|| Error::UnknownVariable(c.variable.clone()))
            })
            .collect::<Result<_>>()?;
        Ok(ResolvedGoal { atoms })
    }

    /// Whether the goal holds in `world`, read through `table`'s columns.
    pub fn holds_in(&self, table: &WorldTable, world: &World) -> Result<bool> {
        Ok(self.resolve(table.columns())?.holds(world.values()))
    }
}

impl fmt::Display for GoalPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.conjuncts.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

pub(crate) struct ResolvedGoal {
    atoms: Vec<(usize, CmpOp, Level)>,
}

impl ResolvedGoal {
    pub(crate) fn holds(&self, values: &[Level]) -> bool {
        self.atoms
            .iter()
            .all(|&(i, op, level)| op.holds(values[i], level))
    }
}

/// An intervened model plus intended effects and a goal over them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinalModel {
    mstar: MStarModel,
    intended: Vec<usize>,
    goal: GoalPredicate,
    final_dag: CausalDag,
}

pub fn build_final_model<S: AsRef<str>>(
    m: &MStarModel,
    intended: impl IntoIterator<Item = S>,
    goal: GoalPredicate,
) -> Result<FinalModel> {
    let base = m.base();
    let action = m.target();
    let effects = base.dag().descendants(action);
    let mut idx = BTreeSet::new();
    for name in intended {
        let i = base.index_of(name.as_ref())?;
        if !effects.contains(&i) {
            return Err(Error::NotAnEffect {
                action: m.target_name().to_string(),
                var: name.as_ref().to_string(),
            });
        }
        idx.insert(i);
    }
    if idx.is_empty() {
        return Err(Error::NoIntendedEffects);
    }
    goal.validate(base)?;
    for v in goal.variables() {
        if !idx.contains(&base.index_of(v)?) {
            return Err(Error::GoalOutsideEffects(v.to_string()));
        }
    }

    let surgered = m.surgered_dag();
    let mut edges: Vec<(usize, usize)> = surgered
        .edges()
        .into_iter()
        .filter(|&(a, b)| !(a == action && idx.contains(&b)))
        .collect();
    edges.extend(idx.iter().map(|&e| (e, action)));
    let final_dag = CausalDag::from_indices(surgered.nodes().to_vec(), edges)?;

    Ok(FinalModel {
        mstar: m.clone(),
        intended: idx.into_iter().collect(),
        goal,
        final_dag,
    })
}

impl FinalModel {
    pub fn mstar(&self) -> &MStarModel {
        &self.mstar
    }

    pub fn action(&self) -> &str {
        self.mstar.target_name()
    }

    pub fn goal(&self) -> &GoalPredicate {
        &self.goal
    }

    /// Intended effects in declaration order.
    pub fn intended_effects(&self) -> Vec<&str> {
        self.intended
            .iter()
            .map(|&i| self.mstar.base().variable(i).name())
            .collect()
    }

    pub fn final_dag(&self) -> &CausalDag {
        &self.final_dag
    }

    /// Intervened worlds in which the goal holds. An empty table means the goal
    /// is unreachable by any action level in any context.
    pub fn compatible_worlds(&self) -> WorldTable {
        let all = self.mstar.enumerate_worlds();
        let goal = self
            .goal
            .resolve(all.columns())
            .expect("goal validated against the base model");
        all.filter(|w| goal.holds(w.values()))
    }

    pub fn goal_reachable(&self) -> bool {
        !self.compatible_worlds().is_empty()
    }

    /// For every pair of variables, unconditionally and given each single other
    /// variable: the d-separation verdict on the final graph next to the exact
    /// verdict on the compatible worlds.
    pub fn implied_dependencies(&self) -> Vec<DependenceReport> {
        let compatible = self.compatible_worlds();
        let names = self.final_dag.nodes();
        let mut out = Vec::new();
        for x in 0..names.len() {
            for y in x + 1..names.len() {
                let given = core::iter::once(None).chain((0..names.len()).filter(|&z| z != x && z != y).map(Some));
                for z in given {
                    let stmt = IndependenceStatement::new(
                        names[x].clone(),
                        names[y].clone(),
                        z.map(|z| names[z].clone()),
                    )
                    .expect("distinct variables");
                    let separated = d_separated(&self.final_dag, &stmt).expect("known variables");
                    let independent = uniform_independent(&compatible, &stmt).ok();
                    out.push(DependenceReport {
                        statement: stmt,
                        graphically_separated: separated,
                        distributionally_independent: independent,
                    });
                }
            }
        }
        out
    }

    pub fn hypothesis(&self) -> GoalHypothesis {
        GoalHypothesis {
            effects: self.intended_effects().into_iter().map(String::from).collect(),
            goal: self.goal.clone(),
            compatible: self.compatible_worlds(),
        }
    }
}

/// Graphical and distributional verdicts for one statement. They are kept apart:
/// deterministic mechanisms can produce independences the graph does not imply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependenceReport {
    pub statement: IndependenceStatement,
    pub graphically_separated: bool,
    /// `None` when no world satisfies the goal.
    pub distributionally_independent: Option<bool>,
}

impl DependenceReport {
    pub fn concordant(&self) -> bool {
        self.distributionally_independent == Some(self.graphically_separated)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distinguishability {
    pub distinguishable: bool,
    /// Worlds compatible with exactly one of the two models.
    pub witnesses: Vec<World>,
}

/// Two final models over the same intervened model can be told apart from
/// observational data iff their compatible worlds differ.
pub fn distinguishable(a: &FinalModel, b: &FinalModel) -> Result<Distinguishability> {
    if a.mstar != b.mstar {
        return Err(Error::MismatchedModels);
    }
    let witnesses = a.compatible_worlds().symmetric_difference(&b.compatible_worlds());
    Ok(Distinguishability {
        distinguishable: !witnesses.is_empty(),
        witnesses,
    })
}

/// A goal hypothesis reduced to what the data can see.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoalHypothesis {
    pub effects: Vec<String>,
    pub goal: GoalPredicate,
    pub compatible: WorldTable,
}

impl fmt::Display for GoalHypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}: {}", self.effects.join(", "), self.goal)
    }
}

/// Every non-empty set of up to `max_effects` causal effects of the action, each
/// crossed with every joint equality target over the set's members. Targets no
/// world can reach are dropped.
///
/// Sets come in order of size, then declaration order; targets in level order.
pub fn enumerate_goal_hypotheses(
    m: &MStarModel,
    max_effects: usize,
    cap: Option<usize>,
) -> Result<Vec<GoalHypothesis>> {
    if max_effects == 0 {
        return Err(Error::ZeroMaxEffects);
    }
    let cap = cap.unwrap_or(DEFAULT_CANDIDATE_CAP);
    let base = m.base();
    let effects: Vec<usize> = base.dag().descendants(m.target()).into_iter().collect();
    let max = max_effects.min(effects.len());

    let mut subsets: Vec<Vec<usize>> = Vec::new();
    for size in 1..=max {
        combinations(&effects, size, &mut Vec::new(), 0, &mut subsets);
    }
    let required = subsets.iter().try_fold(0usize, |acc, s| {
        s.iter()
            .try_fold(1usize, |p, &v| p.checked_mul(base.variable(v).domain().len()))
            .and_then(|n| acc.checked_add(n))
    });
    match required {
        Some(n) if n <= cap => {}
        Some(n) => return Err(Error::BudgetExceeded { required: n, cap }),
        None => {
            return Err(Error::BudgetExceeded {
                required: usize::MAX,
                cap,
            })
        }
    }

    let worlds = m.enumerate_worlds();
    let mut out = Vec::new();
    for subset in subsets {
        let domains: Vec<&[Level]> = subset.iter().map(|&v| base.variable(v).domain()).collect();
        for_each_assignment(&domains, |levels| {
            let conjuncts = subset
                .iter()
                .zip(levels)
                .map(|(&v, &l)| Comparison::new(base.variable(v).name(), CmpOp::Eq, l))
                .collect();
            let compatible = worlds.filter(|w| subset.iter().zip(levels).all(|(&v, &l)| w.get(v) == l));
            if !compatible.is_empty() {
                out.push(GoalHypothesis {
                    effects: subset.iter().map(|&v| base.variable(v).name().to_string()).collect(),
                    goal: GoalPredicate { conjuncts },
                    compatible,
                });
            }
        });
    }
    Ok(out)
}

fn combinations(
    items: &[usize],
    size: usize,
    current: &mut Vec<usize>,
    start: usize,
    out: &mut Vec<Vec<usize>>,
) {
    if current.len() == size {
        out.push(current.clone());
        return;
    }
    for i in start..items.len() {
        current.push(items[i]);
        combinations(items, size, current, i + 1, out);
        current.pop();
    }
}

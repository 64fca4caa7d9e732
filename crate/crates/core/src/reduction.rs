//! Rewriting a final model as a purely causal model.
//!
//! The goal variables are unrolled in time: a pre-action copy (`T₀`) computed
//! with the action at its rest level, and a post-action copy (`T₁`). An intention
//! node `I` reads the pre-action copies and sets the action, which copies `I`.
//! The intention fires when the goal is unmet at rest and some action level
//! achieves it; it then holds the least such level, otherwise the rest level.
//! With a binary action resting at 0 this is the 0/1 intention.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::dsep::d_separated;
use crate::error::{Error, Result};
use crate::model::{for_each_assignment, CausalDag, IndependenceStatement, Level, Mechanism, Scm, Variable, WorldTable};
use crate::teleology::FinalModel;

/// Where a reduction variable comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// A variable that is not a causal effect of the action.
    Context(String),
    /// Goal variable before the action.
    PreState(String),
    Intention,
    Action(String),
    /// Goal variable after the action.
    PostState(String),
    /// Any other effect of the action.
    Downstream(String),
}

impl Provenance {
    /// The original variable this one stands for on the observable side, if any.
    pub fn observable(&self) -> Option<&str> {
        match self {
            Provenance::Context(v)
            | Provenance::Action(v)
            | Provenance::PostState(v)
            | Provenance::Downstream(v) => Some(v),
            Provenance::PreState(_) | Provenance::Intention => None,
        }
    }
}

/// How the goal can be reached across contexts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Achievability {
    /// In every context exactly one action level satisfies the goal.
    ///
    /// The intention only sees the pre-action state, so contexts that share a
    /// pre-action state but need different levels still miss the goal.
    UniqueEverywhere,
    /// Some context admits several goal-satisfying action levels and the
    /// intention picks one of them.
    MultipleSomewhere,
    /// In some context no action level satisfies the goal.
    UnachievableSomewhere,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionModel {
    scm: Scm,
    provenance: Vec<Provenance>,
    /// Base model variable names, in declaration order.
    original: Vec<String>,
    rest: Level,
    achievability: Achievability,
}

impl ReductionModel {
    pub fn scm(&self) -> &Scm {
        &self.scm
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    pub fn rest_level(&self) -> Level {
        self.rest
    }

    pub fn achievability(&self) -> Achievability {
        self.achievability
    }

    pub fn enumerate_worlds(&self) -> WorldTable {
        self.scm.enumerate_worlds()
    }

    fn name_of(&self, pred: impl Fn(&Provenance) -> bool) -> impl Iterator<Item = &str> {
        self.provenance
            .iter()
            .enumerate()
            .filter(move |(_, p)| pred(p))
            .map(|(i, _)| self.scm.variable(i).name())
    }

    pub fn intention(&self) -> &str {
        self.name_of(|p| matches!(p, Provenance::Intention))
            .next()
            .expect("reduction has an intention node")
    }

    pub fn action(&self) -> &str {
        self.name_of(|p| matches!(p, Provenance::Action(_)))
            .next()
            .expect("reduction has an action")
    }

    /// The base model's variables as the reduction sees them: each observable
    /// reduction variable renamed back to its original.
    pub fn observable_worlds(&self) -> WorldTable {
        let source: Vec<&str> = self
            .original
            .iter()
            .map(|o| {
                let i = self
                    .provenance
                    .iter()
                    .position(|p| p.observable() == Some(o))
                    .expect("every original variable has an observable copy");
                self.scm.variable(i).name()
            })
            .collect();
        let projected = self.enumerate_worlds().project(&source).expect("known columns");
        WorldTable::new(self.original.clone(), projected.worlds().to_vec())
    }

    /// The reduction with the intention spliced out: the action reads the
    /// pre-action copies directly.
    pub fn erase_intention(&self) -> Result<Scm> {
        self.scm.splice_out(self.intention())
    }

    /// The reduction collapsed onto the base variables: intention and pre-action
    /// copies spliced out, post-action copies renamed, and arrows a mechanism
    /// ignores dropped.
    pub fn projected_dag(&self) -> CausalDag {
        let mut scm = self.scm.clone();
        for (i, p) in self.provenance.iter().enumerate() {
            if p.observable().is_none() {
                scm = scm
                    .splice_out(self.scm.variable(i).name())
                    .expect("hidden nodes are endogenous");
            }
        }
        let effective = scm.effective_dag();
        let rename = |name: &str| -> String {
            let i = self.scm.index_of(name).expect("kept node");
            self.provenance[i].observable().expect("observable").to_string()
        };
        let edges: Vec<(String, String)> = effective
            .edge_names()
            .into_iter()
            .map(|(a, b)| (rename(&a), rename(&b)))
            .collect();
        CausalDag::new(self.original.clone(), edges).expect("projection of a DAG")
    }
}

fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

/// Builds the causal reduction of a final model. `rest` defaults to the least
/// level of the action's domain.
pub fn build_reduction(f: &FinalModel, rest: Option<Level>) -> Result<ReductionModel> {
    let mstar = f.mstar();
    let model = mstar.surgered();
    let action = mstar.target();
    let action_var = model.variable(action);
    let rest = rest.unwrap_or(action_var.domain()[0]);
    if !action_var.contains(rest) {
        return Err(Error::OutOfDomain {
            var: action_var.name().to_string(),
            level: rest,
        });
    }

    let n = model.variables().len();
    let dag = model.dag();
    let effects = dag.descendants(action);
    let context: Vec<usize> = (0..n).filter(|&v| v != action && !effects.contains(&v)).collect();
    let goal_vars: Vec<usize> = {
        let named = f.goal().variables();
        (0..n).filter(|&v| named.contains(&model.variable(v).name())).collect()
    };
    let goal = f.goal().resolve(&model.names())?;

    // Per context: the world at rest, and which action levels reach the goal.
    let free: Vec<usize> = model.exogenous().into_iter().filter(|&v| v != action).collect();
    let free_domains: Vec<&[Level]> = free.iter().map(|&v| model.variable(v).domain()).collect();
    let mut contexts: Vec<(Vec<Level>, Vec<Level>)> = Vec::new();
    for_each_assignment(&free_domains, |levels| {
        let mut values = alloc::vec![0; n];
        for (&v, &l) in free.iter().zip(levels) {
            values[v] = l;
        }
        let mut achievers = Vec::new();
        let mut at_rest = Vec::new();
        for &a in action_var.domain() {
            values[action] = a;
            model.fill_endogenous(&mut values);
            if a == rest {
                at_rest = values.clone();
            }
            if goal.holds(&values) {
                achievers.push(a);
            }
        }
        contexts.push((at_rest, achievers));
    });
    if contexts.iter().all(|(_, a)| a.is_empty()) {
        return Err(Error::DegenerateReduction(format!(
            "goal `{}` is unreachable by any level of `{}` in any context",
            f.goal(),
            action_var.name()
        )));
    }
    let achievability = if contexts.iter().any(|(_, a)| a.is_empty()) {
        Achievability::UnachievableSomewhere
    } else if contexts.iter().any(|(_, a)| a.len() > 1) {
        Achievability::MultipleSomewhere
    } else {
        Achievability::UniqueEverywhere
    };

    // Variable layout: context, pre-state copies, I, action, effects.
    let mut taken: BTreeSet<String> = model.names().into_iter().collect();
    let mut variables: Vec<Variable> = Vec::new();
    let mut provenance: Vec<Provenance> = Vec::new();
    let mut slot: BTreeMap<usize, usize> = BTreeMap::new();
    for &v in &context {
        slot.insert(v, variables.len());
        variables.push(model.variable(v).clone());
        provenance.push(Provenance::Context(model.variable(v).name().to_string()));
    }
    let mut pre_slot: Vec<usize> = Vec::new();
    for &g in &goal_vars {
        let name = fresh_name(&format!("{}₀", model.variable(g).name()), &taken);
        taken.insert(name.clone());
        pre_slot.push(variables.len());
        variables.push(model.variable(g).renamed(name));
        provenance.push(Provenance::PreState(model.variable(g).name().to_string()));
    }
    let intention_slot = variables.len();
    let intention_name = fresh_name("I", &taken);
    taken.insert(intention_name.clone());
    variables.push(action_var.renamed(intention_name));
    provenance.push(Provenance::Intention);
    slot.insert(action, variables.len());
    variables.push(action_var.clone());
    provenance.push(Provenance::Action(action_var.name().to_string()));
    for &v in &effects {
        slot.insert(v, variables.len());
        let original = model.variable(v).name().to_string();
        if goal_vars.contains(&v) {
            let name = fresh_name(&format!("{original}₁"), &taken);
            taken.insert(name.clone());
            variables.push(model.variable(v).renamed(name));
            provenance.push(Provenance::PostState(original));
        } else {
            variables.push(model.variable(v).clone());
            provenance.push(Provenance::Downstream(original));
        }
    }

    let mut mechanisms: Vec<Option<Mechanism>> = alloc::vec![None; variables.len()];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let copy_mechanism = |v: usize, edges: &mut Vec<(usize, usize)>| {
        model.mechanism(v).map(|m| {
            let parents: Vec<usize> = m.parents().iter().map(|p| slot[p]).collect();
            edges.extend(parents.iter().map(|&p| (p, slot[&v])));
            Mechanism::from_raw(parents, m.table().clone())
        })
    };
    for &v in context.iter().chain(&effects) {
        mechanisms[slot[&v]] = copy_mechanism(v, &mut edges);
    }

    // Pre-state copies read the context ancestors of their goal variable.
    let context_roots: Vec<usize> = context.iter().copied().filter(|&v| model.is_exogenous(v)).collect();
    for (&g, &s) in goal_vars.iter().zip(&pre_slot) {
        let ancestors = dag.ancestors(g);
        let mut parents: Vec<usize> = context.iter().copied().filter(|v| ancestors.contains(v)).collect();
        if parents.is_empty() {
            // The copy is constant; hang it on the context roots.
            parents = context_roots.clone();
        }
        if parents.is_empty() {
            return Err(Error::DegenerateReduction(format!(
                "no context variable to carry the pre-action value of `{}`",
                model.variable(g).name()
            )));
        }
        let domains: Vec<&[Level]> = parents.iter().map(|&p| model.variable(p).domain()).collect();
        let mut table = BTreeMap::new();
        for_each_assignment(&domains, |levels| {
            let mut known: BTreeMap<usize, Level> = parents.iter().copied().zip(levels.iter().copied()).collect();
            known.insert(action, rest);
            table.insert(levels.to_vec(), model.evaluate_node(g, &mut known));
        });
        edges.extend(parents.iter().map(|&p| (slot[&p], s)));
        mechanisms[s] = Some(Mechanism::from_raw(parents.iter().map(|p| slot[p]).collect(), table));
    }

    // The intention is a function of the pre-state: it fires with the least
    // level that reaches the goal in every context sharing that pre-state.
    let pre_domains: Vec<&[Level]> = goal_vars.iter().map(|&g| model.variable(g).domain()).collect();
    let mut intention = BTreeMap::new();
    for_each_assignment(&pre_domains, |pre| {
        let matching: Vec<&Vec<Level>> = contexts
            .iter()
            .filter(|(at_rest, _)| goal_vars.iter().zip(pre).all(|(&g, &l)| at_rest[g] == l))
            .map(|(_, achievers)| achievers)
            .collect();
        let mut probe = alloc::vec![0; n];
        for (&g, &l) in goal_vars.iter().zip(pre) {
            probe[g] = l;
        }
        let level = if goal.holds(&probe) || matching.is_empty() {
            rest
        } else {
            action_var
                .domain()
                .iter()
                .copied()
                .find(|a| matching.iter().all(|ach| ach.contains(a)))
                .unwrap_or(rest)
        };
        intention.insert(pre.to_vec(), level);
    });
    edges.extend(pre_slot.iter().map(|&p| (p, intention_slot)));
    mechanisms[intention_slot] = Some(Mechanism::from_raw(pre_slot.clone(), intention));

    let identity = action_var.domain().iter().map(|&l| (alloc::vec![l], l)).collect();
    edges.push((intention_slot, slot[&action]));
    mechanisms[slot[&action]] = Some(Mechanism::from_raw(alloc::vec![intention_slot], identity));

    let names = variables.iter().map(|v| v.name().to_string()).collect();
    let dag = CausalDag::from_indices(names, edges)?;
    let scm = Scm::from_parts(variables, dag, mechanisms)?;
    Ok(ReductionModel {
        scm,
        provenance,
        original: model.names(),
        rest,
        achievability,
    })
}

/// How the reduction's observable worlds relate to the final model's
/// compatible worlds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionAgreement {
    Equal,
    /// The reduction realizes a strict subset.
    Subset,
    Differs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceDisagreement {
    pub statement: IndependenceStatement,
    pub separated_in_final: bool,
    pub separated_in_reduction: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuralDiff {
    pub only_in_final: Vec<(String, String)>,
    pub only_in_reduction: Vec<(String, String)>,
    /// What the action listens to in the final model.
    pub final_action_parents: Vec<String>,
    /// What the action listens to once the reduction is projected.
    pub reduction_action_parents: Vec<String>,
    /// The reduction's action never varies, so it has no wiring to compare.
    pub reduction_action_constant: bool,
    pub independence_disagreements: Vec<IndependenceDisagreement>,
    pub projection: ProjectionAgreement,
    pub achievability: Achievability,
}

impl StructuralDiff {
    pub fn action_wiring_differs(&self) -> bool {
        !self.reduction_action_constant && self.final_action_parents != self.reduction_action_parents
    }

    pub fn is_structurally_equal(&self) -> bool {
        self.only_in_final.is_empty() && self.only_in_reduction.is_empty()
    }
}

/// Compares a final model with its reduction projected onto the base variables.
pub fn compare_structures(f: &FinalModel, r: &ReductionModel) -> Result<StructuralDiff> {
    let fin = f.final_dag();
    if fin.nodes() != r.original.as_slice() {
        return Err(Error::MismatchedModels);
    }
    let red = r.projected_dag();
    let fin_edges = fin.edge_names();
    let red_edges = red.edge_names();
    let only_in_final = fin_edges.iter().filter(|e| !red_edges.contains(e)).cloned().collect();
    let only_in_reduction = red_edges.iter().filter(|e| !fin_edges.contains(e)).cloned().collect();

    let action = fin.index_of(f.action())?;
    let parents = |g: &CausalDag| -> Vec<String> { g.parents(action).iter().map(|&p| g.name(p).to_string()).collect() };
    let reduction_action_constant = r.observable_worlds().worlds().windows(2).all(|w| w[0].get(action) == w[1].get(action));

    let names = fin.nodes();
    let mut independence_disagreements = Vec::new();
    for x in 0..names.len() {
        for y in x + 1..names.len() {
            let given = core::iter::once(None).chain((0..names.len()).filter(|&z| z != x && z != y).map(Some));
            for z in given {
                let stmt = IndependenceStatement::new(names[x].clone(), names[y].clone(), z.map(|z| names[z].clone()))?;
                let a = d_separated(fin, &stmt)?;
                let b = d_separated(&red, &stmt)?;
                if a != b {
                    independence_disagreements.push(IndependenceDisagreement {
                        statement: stmt,
                        separated_in_final: a,
                        separated_in_reduction: b,
                    });
                }
            }
        }
    }

    let compatible = f.compatible_worlds();
    let observed = r.observable_worlds();
    let projection = if observed == compatible {
        ProjectionAgreement::Equal
    } else if observed.is_subset(&compatible) {
        ProjectionAgreement::Subset
    } else {
        ProjectionAgreement::Differs
    };

    Ok(StructuralDiff {
        only_in_final,
        only_in_reduction,
        final_action_parents: parents(fin),
        reduction_action_parents: parents(&red),
        reduction_action_constant,
        independence_disagreements,
        projection,
        achievability: r.achievability,
    })
}

use std::collections::{BTreeMap, BTreeSet};

use finality_core::{
    build_final_model, do_surgery, Comparison, Error, FinalModel, GoalPredicate, InterventionSpec, Level,
    MStarModel, Scm, Variable,
};

use super::{parse_model, Document, Domain, ErrorKind, Loc, MechExpr, SpecError, Statement};

/// A named final model from a spec.
#[derive(Debug, Clone)]
pub struct FinalSpec {
    pub name: String,
    pub model: FinalModel,
}

/// A validated spec: the causal model, its declared intervention, rest levels
/// and final models.
#[derive(Debug, Clone)]
pub struct ModelSpec {
    scm: Scm,
    mstar: Option<MStarModel>,
    rests: BTreeMap<String, Level>,
    finals: Vec<FinalSpec>,
}

impl ModelSpec {
    pub fn scm(&self) -> &Scm {
        &self.scm
    }

    /// The model under the spec's `do` declaration.
    pub fn mstar(&self) -> Option<&MStarModel> {
        self.mstar.as_ref()
    }

    pub fn rest_level(&self, variable: &str) -> Option<Level> {
        self.rests.get(variable).copied()
    }

    pub fn finals(&self) -> &[FinalSpec] {
        &self.finals
    }

    pub fn final_model(&self, name: &str) -> Option<&FinalModel> {
        self.finals.iter().find(|f| f.name == name).map(|f| &f.model)
    }
}

/// Parses and validates spec text.
pub fn load_model(text: &str) -> Result<ModelSpec, SpecError> {
    ModelSpec::from_document(&parse_model(text)?)
}

fn err(kind: ErrorKind, loc: Loc, message: impl Into<String>) -> SpecError {
    SpecError::new(kind, loc, message)
}

impl ModelSpec {
    pub fn from_document(doc: &Document) -> Result<Self, SpecError> {
        let mut vars: Vec<(Variable, Loc)> = Vec::new();
        for s in &doc.statements {
            if let Statement::Var { name, domain, loc } = s {
                if vars.iter().any(|(v, _)| v.name() == name) {
                    return Err(err(ErrorKind::Duplicate, *loc, format!("variable `{name}` is declared more than once")));
                }
                if let Domain::Range(lo, hi) = domain {
                    if lo > hi {
                        return Err(err(ErrorKind::Invalid, *loc, format!("empty range {lo}..{hi} for `{name}`")));
                    }
                }
                let var = Variable::new(name.clone(), domain.levels()).map_err(|e| err(ErrorKind::Invalid, *loc, e.to_string()))?;
                vars.push((var, *loc));
            }
        }
        let lookup = |name: &str, loc: Loc| -> Result<&Variable, SpecError> {
            vars.iter()
                .map(|(v, _)| v)
                .find(|v| v.name() == name)
                .ok_or_else(|| err(ErrorKind::Undeclared, loc, format!("variable `{name}` is not declared")))
        };

        let mut edges: Vec<(String, String, Loc)> = Vec::new();
        for s in &doc.statements {
            if let Statement::Edge { from, to, loc } = s {
                lookup(from, *loc)?;
                lookup(to, *loc)?;
                if from == to {
                    return Err(err(ErrorKind::Invalid, *loc, format!("edge `{from} -> {to}` is a self-loop")));
                }
                if edges.iter().any(|(a, b, _)| a == from && b == to) {
                    return Err(err(ErrorKind::Duplicate, *loc, format!("edge `{from} -> {to}` is declared more than once")));
                }
                if reaches(&edges, to, from) {
                    return Err(err(ErrorKind::Cycle, *loc, format!("edge `{from} -> {to}` closes a cycle")));
                }
                edges.push((from.clone(), to.clone(), *loc));
            }
        }
        let names: Vec<String> = vars.iter().map(|(v, _)| v.name().to_string()).collect();

        let mut builder = Scm::builder();
        for (v, _) in &vars {
            builder = builder.variable(v.clone());
        }
        for (a, b, _) in &edges {
            builder = builder.edge(a.clone(), b.clone());
        }
        let mut mech_locs: BTreeMap<&str, Loc> = BTreeMap::new();
        let mut intervention: Option<(&str, Loc)> = None;
        let mut rests = BTreeMap::new();
        let mut final_names = BTreeSet::new();
        for s in &doc.statements {
            match s {
                Statement::Mech { child, expr, loc } => {
                    let child_var = lookup(child, *loc)?;
                    if mech_locs.insert(child, *loc).is_some() {
                        return Err(err(ErrorKind::Duplicate, *loc, format!("mechanism for `{child}` is declared more than once")));
                    }
                    match expr {
                        MechExpr::Sum(args) => {
                            for a in args {
                                lookup(a, *loc)?;
                            }
                            builder = builder.sum_of(child.clone(), args.clone());
                        }
                        MechExpr::Table { parents, rows } => {
                            let parents = match parents {
                                Some(ps) => ps.clone(),
                                None => names
                                    .iter()
                                    .filter(|p| edges.iter().any(|(a, b, _)| a == *p && b == child))
                                    .cloned()
                                    .collect(),
                            };
                            if parents.is_empty() {
                                return Err(err(
                                    ErrorKind::Invalid,
                                    *loc,
                                    format!("`{child}` has no parents, so it cannot have a mechanism"),
                                ));
                            }
                            let parent_vars = parents.iter().map(|p| lookup(p, *loc)).collect::<Result<Vec<_>, _>>()?;
                            let mut seen = BTreeSet::new();
                            for row in rows {
                                if row.key.len() != parents.len() {
                                    return Err(err(
                                        ErrorKind::Invalid,
                                        row.loc,
                                        format!("row has {} levels, `{child}` reads {} parents", row.key.len(), parents.len()),
                                    ));
                                }
                                for (&l, p) in row.key.iter().zip(&parent_vars) {
                                    if !p.contains(l) {
                                        return Err(err(
                                            ErrorKind::Invalid,
                                            row.loc,
                                            format!("level {l} is outside the domain of `{}`", p.name()),
                                        ));
                                    }
                                }
                                if !child_var.contains(row.value) {
                                    return Err(err(
                                        ErrorKind::Invalid,
                                        row.loc,
                                        format!("level {} is outside the domain of `{child}`", row.value),
                                    ));
                                }
                                if !seen.insert(&row.key) {
                                    return Err(err(ErrorKind::Duplicate, row.loc, "row is given more than once"));
                                }
                            }
                            builder = builder.table(child.clone(), parents, rows.iter().map(|r| (r.key.clone(), r.value)));
                        }
                    }
                }
                Statement::Do { target, loc } => {
                    lookup(target, *loc)?;
                    if intervention.replace((target, *loc)).is_some() {
                        return Err(err(ErrorKind::Duplicate, *loc, "only one `do` declaration is allowed"));
                    }
                }
                Statement::Rest { variable, level, loc } => {
                    let var = lookup(variable, *loc)?;
                    if !var.contains(*level) {
                        return Err(err(ErrorKind::Invalid, *loc, format!("level {level} is outside the domain of `{variable}`")));
                    }
                    if rests.insert(variable.clone(), *level).is_some() {
                        return Err(err(ErrorKind::Duplicate, *loc, format!("rest level for `{variable}` is declared more than once")));
                    }
                }
                Statement::Final { name, effects, goal, loc } => {
                    if !final_names.insert(name) {
                        return Err(err(ErrorKind::Duplicate, *loc, format!("final model `{name}` is declared more than once")));
                    }
                    for v in effects.iter().chain(goal.iter().map(|g| &g.variable)) {
                        lookup(v, *loc)?;
                    }
                }
                Statement::Var { .. } | Statement::Edge { .. } => {}
            }
        }

        let scm = builder.build().map_err(|e| {
            let var_loc = |name: &str| vars.iter().find(|(v, _)| v.name() == name).map(|(_, l)| *l);
            let (kind, loc) = match &e {
                Error::MissingMechanism(n) => (ErrorKind::NonTotal, var_loc(n)),
                Error::NonTotalMechanism { child, .. } => (ErrorKind::NonTotal, mech_locs.get(child.as_str()).copied()),
                Error::OutOfDomain { var, .. } => (ErrorKind::NonTotal, mech_locs.get(var.as_str()).copied()),
                Error::UnexpectedMechanism(n) | Error::MechanismParents { child: n, .. } | Error::MechanismArity { child: n, .. } => {
                    (ErrorKind::Invalid, mech_locs.get(n.as_str()).copied())
                }
                _ => (ErrorKind::Invalid, None),
            };
            let message = match &e {
                Error::OutOfDomain { var, level } => {
                    format!("mechanism for `{var}` yields level {level}, outside its domain")
                }
                other => other.to_string(),
            };
            err(kind, loc.unwrap_or(Loc { line: 1, column: 1 }), message)
        })?;

        let mstar = intervention
            .map(|(target, loc)| {
                do_surgery(&scm, InterventionSpec::new(target)).map_err(|e| err(ErrorKind::Invalid, loc, e.to_string()))
            })
            .transpose()?;

        let mut finals = Vec::new();
        for s in &doc.statements {
            let Statement::Final { name, effects, goal, loc } = s else {
                continue;
            };
            let Some(m) = &mstar else {
                return Err(err(ErrorKind::Invalid, *loc, format!("final model `{name}` needs a `do` declaration")));
            };
            let goal = GoalPredicate::new(goal.iter().map(|g| Comparison::new(g.variable.clone(), g.op, g.level)).collect())
                .map_err(|e| err(ErrorKind::Invalid, *loc, e.to_string()))?;
            let model = build_final_model(m, effects, goal)
                .map_err(|e| err(ErrorKind::Invalid, *loc, format!("final model `{name}`: {e}")))?;
            finals.push(FinalSpec {
                name: name.clone(),
                model,
            });
        }

        Ok(Self {
            scm,
            mstar,
            rests,
            finals,
        })
    }
}

fn reaches(edges: &[(String, String, Loc)], from: &str, to: &str) -> bool {
    let mut seen = BTreeSet::new();
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        if v == to {
            return true;
        }
        for (a, b, _) in edges {
            if a == v && seen.insert(b.as_str()) {
                stack.push(b);
            }
        }
    }
    false
}

//! Confronting goal hypotheses with observed data.
//!
//! Dependence is judged by exact factorization of empirical frequencies, not by
//! a significance test: a pair is dependent iff some cell frequency differs from
//! the product of its marginals.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::independence::{world_contingency, Contingency, StatementColumns};
use crate::intervention::MStarModel;
use crate::model::{IndependenceStatement, Level, Scm, World, WorldTable};
use crate::teleology::{FinalModel, GoalHypothesis};

/// Observed rows with multiplicities. Duplicate rows are merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    columns: Vec<String>,
    rows: BTreeMap<World, u64>,
}

impl Dataset {
    pub fn new(columns: Vec<String>, rows: impl IntoIterator<Item = (Vec<Level>, u64)>) -> Result<Self> {
        for (i, c) in columns.iter().enumerate() {
            if columns[..i].contains(c) {
                return Err(Error::DuplicateVariable(c.clone()));
            }
        }
        let mut merged: BTreeMap<World, u64> = BTreeMap::new();
        for (values, count) in rows {
            if values.len() != columns.len() {
                return Err(Error::RowWidth {
                    expected: columns.len(),
                    found: values.len(),
                });
            }
            if count == 0 {
                return Err(Error::ZeroCount);
            }
            *merged.entry(World::new(values)).or_default() += count;
        }
        if merged.is_empty() {
            return Err(Error::EmptyDataset);
        }
        Ok(Self {
            columns,
            rows: merged,
        })
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    /// Distinct rows with their counts, sorted.
    pub fn rows(&self) -> impl Iterator<Item = (&World, u64)> {
        self.rows.iter().map(|(w, &c)| (w, c))
    }

    pub fn distinct_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn total(&self) -> u64 {
        self.rows.values().sum()
    }

    /// The observed worlds, without counts.
    pub fn support(&self) -> WorldTable {
        WorldTable::new(self.columns.clone(), self.rows.keys().cloned().collect())
    }

    /// Reorders columns to the model's declaration order and checks every value
    /// against its domain. The column set must equal the model's variables.
    pub fn bind(&self, scm: &Scm) -> Result<Dataset> {
        let names = scm.names();
        let mismatch = || Error::Binding {
            expected: names.clone(),
            found: self.columns.clone(),
        };
        if self.columns.len() != names.len() {
            return Err(mismatch());
        }
        let order = names
            .iter()
            .map(|n| self.columns.iter().position(|c| c == n).ok_or_else(mismatch))
            .collect::<Result<Vec<_>>>()?;
        let mut rows = BTreeMap::new();
        for (w, &count) in &self.rows {
            let values: Vec<Level> = order.iter().map(|&i| w.get(i)).collect();
            for (v, &level) in scm.variables().iter().zip(&values) {
                if !v.contains(level) {
                    return Err(Error::OutOfDomain {
                        var: v.name().into(),
                        level,
                    });
                }
            }
            *rows.entry(World::new(values)).or_default() += count;
        }
        Ok(Dataset {
            columns: names,
            rows,
        })
    }

    fn ensure_columns(&self, columns: &[String]) -> Result<()> {
        if self.columns != columns {
            return Err(Error::Binding {
                expected: columns.to_vec(),
                found: self.columns.clone(),
            });
        }
        Ok(())
    }

    fn contingency(&self, stmt: &IndependenceStatement) -> Result<Contingency> {
        let cols = StatementColumns::resolve(&self.columns, stmt)?;
        let mut out = Contingency::default();
        for (w, &count) in &self.rows {
            cols.add_row(&mut out, w.values(), count);
        }
        Ok(out)
    }
}

/// Expected and observed verdicts for one independence statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependenceCheck {
    pub statement: IndependenceStatement,
    pub expected_independent: bool,
    pub observed_independent: bool,
    /// Conditioning strata the hypothesis allows but the data never visits.
    /// Both verdicts are computed without them.
    pub skipped_strata: Vec<Vec<Level>>,
}

impl DependenceCheck {
    pub fn agree(&self) -> bool {
        self.expected_independent == self.observed_independent
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentificationVerdict {
    /// Position of the hypothesis in the ranked input.
    pub hypothesis: usize,
    pub compatible: bool,
    /// Observed rows outside the hypothesis' compatible worlds, with counts.
    pub violating_rows: Vec<(World, u64)>,
    pub dependence_checks: Vec<DependenceCheck>,
    pub compatible_world_count: usize,
}

fn violations(compatible: &WorldTable, d: &Dataset) -> Result<Vec<(World, u64)>> {
    d.ensure_columns(compatible.columns())?;
    Ok(d
        .rows()
        .filter(|(w, _)| !compatible.contains(w))
        .map(|(w, c)| (w.clone(), c))
        .collect())
}

fn dependence(compatible: &WorldTable, d: &Dataset, stmt: &IndependenceStatement) -> Result<DependenceCheck> {
    d.ensure_columns(compatible.columns())?;
    let observed = d.contingency(stmt)?;
    let mut expected = world_contingency(compatible, stmt)?;
    let skipped: Vec<Vec<Level>> = expected
        .strata()
        .filter(|z| !observed.strata().any(|o| o == *z))
        .cloned()
        .collect();
    expected.retain_strata(|z| !skipped.contains(z));
    let expected_independent = expected.is_empty() || expected.independent();
    Ok(DependenceCheck {
        statement: stmt.clone(),
        expected_independent,
        observed_independent: observed.independent(),
        skipped_strata: skipped,
    })
}

/// Support part of a verdict: which observed rows the final model forbids.
/// The dataset must be bound to the model (see [`Dataset::bind`]).
pub fn check_support(f: &FinalModel, d: &Dataset) -> Result<IdentificationVerdict> {
    let compatible = f.compatible_worlds();
    let violating_rows = violations(&compatible, d)?;
    Ok(IdentificationVerdict {
        hypothesis: 0,
        compatible: violating_rows.is_empty(),
        violating_rows,
        dependence_checks: Vec::new(),
        compatible_world_count: compatible.len(),
    })
}

/// The final model's verdict on `stmt` (uniform over its compatible worlds)
/// against the data's.
pub fn check_dependence(f: &FinalModel, d: &Dataset, stmt: &IndependenceStatement) -> Result<DependenceCheck> {
    dependence(&f.compatible_worlds(), d, stmt)
}

/// Which dependence statements every hypothesis is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CheckSelection {
    /// The action against each variable that is not one of its causal effects.
    /// Goal-directed action makes these pairs dependent where causality alone
    /// leaves them independent.
    #[default]
    ActionVsContext,
    /// Every unconditional pair.
    AllPairs,
    /// Support only.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankOptions {
    pub checks: CheckSelection,
    /// Put the surviving hypothesis with the fewest compatible worlds first.
    pub prefer_specific: bool,
}

impl Default for RankOptions {
    fn default() -> Self {
        Self {
            checks: CheckSelection::default(),
            prefer_specific: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedVerdict {
    pub verdict: IdentificationVerdict,
    /// Observational-equivalence class: hypotheses with identical compatible
    /// worlds share a class. Classes are numbered by first appearance in the input.
    pub class: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankOutcome {
    /// Exactly one hypothesis is compatible and most specific.
    Unique(usize),
    NoneCompatible,
    /// Several hypotheses tie for the top spot.
    Tied(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    pub entries: Vec<RankedVerdict>,
    pub outcome: RankOutcome,
}

/// Scores each hypothesis against the data and orders them: compatible first,
/// then (if enabled) fewest compatible worlds, then input order.
pub fn rank_hypotheses(
    m: &MStarModel,
    hypotheses: &[GoalHypothesis],
    d: &Dataset,
    opts: &RankOptions,
) -> Result<Ranking> {
    if hypotheses.is_empty() {
        return Err(Error::NoCandidates);
    }
    let statements = selected_statements(m, opts.checks);

    let mut classes: Vec<&WorldTable> = Vec::new();
    let mut entries = Vec::with_capacity(hypotheses.len());
    for (i, h) in hypotheses.iter().enumerate() {
        let violating_rows = violations(&h.compatible, d)?;
        let dependence_checks = if h.compatible.is_empty() {
            Vec::new()
        } else {
            statements
                .iter()
                .map(|s| dependence(&h.compatible, d, s))
                .collect::<Result<Vec<_>>>()?
        };
        let compatible = violating_rows.is_empty() && dependence_checks.iter().all(DependenceCheck::agree);
        let class = match classes.iter().position(|c| **c == h.compatible) {
            Some(c) => c,
            None => {
                classes.push(&h.compatible);
                classes.len() - 1
            }
        };
        entries.push(RankedVerdict {
            verdict: IdentificationVerdict {
                hypothesis: i,
                compatible,
                violating_rows,
                dependence_checks,
                compatible_world_count: h.compatible.len(),
            },
            class,
        });
    }

    let specific = opts.prefer_specific;
    entries.sort_by_key(|e| {
        (
            !e.verdict.compatible,
            if specific { e.verdict.compatible_world_count } else { 0 },
            e.verdict.hypothesis,
        )
    });

    let survivors: Vec<&RankedVerdict> = entries.iter().filter(|e| e.verdict.compatible).collect();
    let outcome = match survivors.first() {
        None => RankOutcome::NoneCompatible,
        Some(top) => {
            let best: Vec<usize> = survivors
                .iter()
                .filter(|e| !specific || e.verdict.compatible_world_count == top.verdict.compatible_world_count)
                .map(|e| e.verdict.hypothesis)
                .collect();
            if best.len() == 1 {
                RankOutcome::Unique(best[0])
            } else {
                RankOutcome::Tied(best)
            }
        }
    };
    Ok(Ranking { entries, outcome })
}

/// [`rank_hypotheses`] over fully built final models, which must share one
/// intervened model.
pub fn rank_final_models(finals: &[FinalModel], d: &Dataset, opts: &RankOptions) -> Result<Ranking> {
    let Some(first) = finals.first() else {
        return Err(Error::NoCandidates);
    };
    if finals.iter().any(|f| f.mstar() != first.mstar()) {
        return Err(Error::MismatchedModels);
    }
    let hypotheses: Vec<GoalHypothesis> = finals.iter().map(FinalModel::hypothesis).collect();
    rank_hypotheses(first.mstar(), &hypotheses, d, opts)
}

fn selected_statements(m: &MStarModel, checks: CheckSelection) -> Vec<IndependenceStatement> {
    let base = m.base();
    let names = base.names();
    match checks {
        CheckSelection::None => Vec::new(),
        CheckSelection::AllPairs => {
            let mut out = Vec::new();
            for x in 0..names.len() {
                for y in x + 1..names.len() {
                    out.push(IndependenceStatement::marginal(names[x].clone(), names[y].clone()).expect("distinct"));
                }
            }
            out
        }
        CheckSelection::ActionVsContext => {
            let action = m.target();
            let effects = base.dag().descendants(action);
            (0..names.len())
                .filter(|&v| v != action && !effects.contains(&v))
                .map(|v| {
                    IndependenceStatement::marginal(names[action].clone(), names[v].clone()).expect("distinct")
                })
                .collect()
        }
    }
}

//! Exact independence tests on uniformly weighted worlds and counted rows.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::model::{IndependenceStatement, Level, WorldTable};

/// An exact probability.
pub type Probability = Ratio<u64>;

#[derive(Default)]
struct Stratum {
    total: u128,
    joint: BTreeMap<(Level, Level), u128>,
    x: BTreeMap<Level, u128>,
    y: BTreeMap<Level, u128>,
}

impl Stratum {
    /// `P(x,y|z) = P(x|z) P(y|z)` for every cell, cleared of denominators:
    /// `n(x,y,z) n(z) = n(x,z) n(y,z)`.
    fn factorizes(&self) -> bool {
        self.x.iter().all(|(&xv, &nx)| {
            self.y.iter().all(|(&yv, &ny)| {
                let nxy = self.joint.get(&(xv, yv)).copied().unwrap_or(0);
                nxy * self.total == nx * ny
            })
        })
    }
}

/// Weighted `(x, y, z)` observations grouped by conditioning stratum.
#[derive(Default)]
pub(crate) struct Contingency {
    strata: BTreeMap<Vec<Level>, Stratum>,
}

impl Contingency {
    pub(crate) fn add(&mut self, x: Level, y: Level, z: Vec<Level>, weight: u64) {
        let w = u128::from(weight);
        let s = self.strata.entry(z).or_default();
        s.total += w;
        *s.joint.entry((x, y)).or_default() += w;
        *s.x.entry(x).or_default() += w;
        *s.y.entry(y).or_default() += w;
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub(crate) fn strata(&self) -> impl Iterator<Item = &Vec<Level>> {
        self.strata.keys()
    }

    pub(crate) fn retain_strata(&mut self, keep: impl Fn(&Vec<Level>) -> bool) {
        self.strata.retain(|z, _| keep(z));
    }

    pub(crate) fn independent(&self) -> bool {
        self.strata.values().all(Stratum::factorizes)
    }
}

/// Column positions of a statement's variables within a table's columns.
pub(crate) struct StatementColumns {
    pub x: usize,
    pub y: usize,
    pub given: Vec<usize>,
}

impl StatementColumns {
    pub(crate) fn resolve(columns: &[alloc::string::String], stmt: &IndependenceStatement) -> Result<Self> {
        let find = |name: &str| {
            columns
                .iter()
                .position(|c| c == name)
                .ok_or_else(|| Error::UnknownVariable(name.into()))
        };
        Ok(Self {
            x: find(stmt.x())?,
            y: find(stmt.y())?,
            given: stmt.given().iter().map(|z| find(z)).collect::<Result<_>>()?,
        })
    }

    pub(crate) fn add_row(&self, table: &mut Contingency, values: &[Level], weight: u64) {
        let z = self.given.iter().map(|&i| values[i]).collect();
        table.add(values[self.x], values[self.y], z, weight);
    }
}

pub(crate) fn world_contingency(table: &WorldTable, stmt: &IndependenceStatement) -> Result<Contingency> {
    let cols = StatementColumns::resolve(table.columns(), stmt)?;
    let mut out = Contingency::default();
    for w in table.worlds() {
        cols.add_row(&mut out, w.values(), 1);
    }
    Ok(out)
}

/// Exact independence under the uniform distribution over `table`'s worlds,
/// checked in every conditioning stratum present in the table.
pub fn uniform_independent(table: &WorldTable, stmt: &IndependenceStatement) -> Result<bool> {
    if table.is_empty() {
        return Err(Error::DegenerateDistribution);
    }
    Ok(world_contingency(table, stmt)?.independent())
}

/// `P(query | given = level)` under the uniform distribution over `table`.
pub fn conditional_distribution(
    table: &WorldTable,
    given: Option<(&str, Level)>,
    query: &str,
) -> Result<BTreeMap<Level, Probability>> {
    let q = table.column_index(query)?;
    let cond = match given {
        Some((name, level)) => Some((table.column_index(name)?, level)),
        None => None,
    };
    let mut counts: BTreeMap<Level, u64> = BTreeMap::new();
    let mut total = 0u64;
    for w in table.worlds() {
        if cond.is_some_and(|(i, l)| w.get(i) != l) {
            continue;
        }
        *counts.entry(w.get(q)).or_default() += 1;
        total += 1;
    }
    if total == 0 {
        return Err(Error::DegenerateDistribution);
    }
    Ok(counts
        .into_iter()
        .map(|(l, n)| (l, Ratio::new(n, total)))
        .collect())
}

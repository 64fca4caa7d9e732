//! Variables, DAG structure, deterministic mechanisms and world enumeration.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// A level of a discrete variable.
pub type Level = i64;

/// A named discrete variable with an ordered domain of at least two levels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    name: String,
    domain: Vec<Level>,
}

impl Variable {
    pub fn new(name: impl Into<String>, domain: impl IntoIterator<Item = Level>) -> Result<Self> {
        let name = name.into();
        let domain: Vec<Level> = domain.into_iter().collect();
        if domain.len() < 2 {
            return Err(Error::TooFewLevels {
                name,
                count: domain.len(),
            });
        }
        if domain.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnorderedDomain(name));
        }
        Ok(Self { name, domain })
    }

    /// Inclusive integer range `lo..=hi`.
    pub fn range(name: impl Into<String>, lo: Level, hi: Level) -> Result<Self> {
        Self::new(name, lo..=hi)
    }

    pub fn binary(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            domain: alloc::vec![0, 1],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &[Level] {
        &self.domain
    }

    pub fn contains(&self, level: Level) -> bool {
        self.domain.binary_search(&level).is_ok()
    }

    pub(crate) fn renamed(&self, name: String) -> Self {
        Self {
            name,
            domain: self.domain.clone(),
        }
    }
}

/// A directed acyclic graph over named nodes.
///
/// Nodes keep their declaration order; parent and child lists are sorted by it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalDag {
    nodes: Vec<String>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    topo: Vec<usize>,
}

impl CausalDag {
    pub fn new<S, T>(nodes: Vec<String>, edges: impl IntoIterator<Item = (S, T)>) -> Result<Self>
    where
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let mut seen = BTreeSet::new();
        for n in &nodes {
            if !seen.insert(n.as_str()) {
                return Err(Error::DuplicateVariable(n.clone()));
            }
        }
        let lookup = |name: &str| {
            nodes
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))
        };
        let mut indexed = Vec::new();
        for (a, b) in edges {
            indexed.push((lookup(a.as_ref())?, lookup(b.as_ref())?));
        }
        Self::from_indices(nodes, indexed)
    }

    pub(crate) fn from_indices(nodes: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = nodes.len();
        let mut parents = alloc::vec![Vec::new(); n];
        let mut children = alloc::vec![Vec::new(); n];
        for (a, b) in edges {
            if a == b {
                return Err(Error::SelfLoop(nodes[a].clone()));
            }
            if children[a].contains(&b) {
                return Err(Error::DuplicateEdge(nodes[a].clone(), nodes[b].clone()));
            }
            children[a].push(b);
            parents[b].push(a);
        }
        parents.iter_mut().for_each(|p| p.sort_unstable());
        children.iter_mut().for_each(|c| c.sort_unstable());

        // Kahn's algorithm, smallest index first so the order is stable.
        let mut indegree: Vec<usize> = parents.iter().map(Vec::len).collect();
        let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = ready.pop_first() {
            topo.push(v);
            for &c in &children[v] {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    ready.insert(c);
                }
            }
        }
        if topo.len() < n {
            let offender = (0..n)
                .filter(|&v| indegree[v] > 0)
                .find(|&v| reaches(&children, v, v))
                .unwrap_or(0);
            return Err(Error::Cycle(nodes[offender].clone()));
        }
        Ok(Self {
            nodes,
            parents,
            children,
            topo,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn name(&self, node: usize) -> &str {
        &self.nodes[node]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.nodes
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn parents(&self, node: usize) -> &[usize] {
        &self.parents[node]
    }

    pub fn children(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.children[from].contains(&to)
    }

    /// All edges, sorted by (parent, child) index.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self
            .children
            .iter()
            .enumerate()
            .flat_map(|(a, cs)| cs.iter().map(move |&b| (a, b)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn edge_names(&self) -> Vec<(String, String)> {
        self.edges()
            .into_iter()
            .map(|(a, b)| (self.nodes[a].clone(), self.nodes[b].clone()))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.children.iter().map(Vec::len).sum()
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// Strict descendants of `node`.
    pub fn descendants(&self, node: usize) -> BTreeSet<usize> {
        closure(&self.children, node)
    }

    /// Strict ancestors of `node`.
    pub fn ancestors(&self, node: usize) -> BTreeSet<usize> {
        closure(&self.parents, node)
    }
}

fn closure(adj: &[Vec<usize>], start: usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    let mut queue: VecDeque<usize> = adj[start].iter().copied().collect();
    while let Some(v) = queue.pop_front() {
        if out.insert(v) {
            queue.extend(adj[v].iter().copied());
        }
    }
    out
}

fn reaches(adj: &[Vec<usize>], from: usize, to: usize) -> bool {
    closure(adj, from).contains(&to)
}

/// A deterministic mechanism: a total lookup table from parent levels to a child level.
///
/// Parents are held as variable indices of the owning [`Scm`], in the order the
/// table keys use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mechanism {
    parents: Vec<usize>,
    table: BTreeMap<Vec<Level>, Level>,
}

impl Mechanism {
    pub(crate) fn from_raw(parents: Vec<usize>, table: BTreeMap<Vec<Level>, Level>) -> Self {
        Self { parents, table }
    }

    pub fn parents(&self) -> &[usize] {
        &self.parents
    }

    pub fn table(&self) -> &BTreeMap<Vec<Level>, Level> {
        &self.table
    }

    pub fn evaluate(&self, inputs: &[Level]) -> Option<Level> {
        self.table.get(inputs).copied()
    }

    /// Whether the output ever changes with the parent at `position`.
    pub fn depends_on(&self, position: usize) -> bool {
        let mut seen: BTreeMap<Vec<Level>, Level> = BTreeMap::new();
        for (key, &out) in &self.table {
            let mut rest = key.clone();
            rest.remove(position);
            match seen.get(&rest) {
                Some(&prev) if prev != out => return true,
                Some(_) => {}
                None => {
                    seen.insert(rest, out);
                }
            }
        }
        false
    }
}

enum MechanismDef {
    Table {
        parents: Vec<String>,
        rows: Vec<(Vec<Level>, Level)>,
    },
    Sum {
        parents: Option<Vec<String>>,
    },
}

/// Collects declarations and validates them into a [`Scm`].
#[derive(Default)]
pub struct ScmBuilder {
    variables: Vec<Variable>,
    edges: Vec<(String, String)>,
    mechanisms: Vec<(String, MechanismDef)>,
}

impl ScmBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn variable(mut self, variable: Variable) -> Self {
        self.variables.push(variable);
        self
    }

    pub fn edge(mut self, from: impl Into<String>, to: impl Into<String>) -> Self {
        self.edges.push((from.into(), to.into()));
        self
    }

    /// Explicit table; `parents` fixes the key order of `rows`.
    pub fn table<P, S>(
        mut self,
        child: impl Into<String>,
        parents: P,
        rows: impl IntoIterator<Item = (Vec<Level>, Level)>,
    ) -> Self
    where
        P: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.mechanisms.push((
            child.into(),
            MechanismDef::Table {
                parents: parents.into_iter().map(Into::into).collect(),
                rows: rows.into_iter().collect(),
            },
        ));
        self
    }

    /// The child takes the sum of its graph parents. Sums outside the child's
    /// domain make the mechanism non-total; nothing is clamped.
    pub fn sum(mut self, child: impl Into<String>) -> Self {
        self.mechanisms
            .push((child.into(), MechanismDef::Sum { parents: None }));
        self
    }

    /// Like [`ScmBuilder::sum`], but with the summands named explicitly.
    pub fn sum_of<P, S>(mut self, child: impl Into<String>, parents: P) -> Self
    where
        P: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.mechanisms.push((
            child.into(),
            MechanismDef::Sum {
                parents: Some(parents.into_iter().map(Into::into).collect()),
            },
        ));
        self
    }

    pub fn build(self) -> Result<Scm> {
        let names: Vec<String> = self.variables.iter().map(|v| v.name.clone()).collect();
        let dag = CausalDag::new(names, self.edges)?;
        let mut mechanisms: Vec<Option<Mechanism>> = alloc::vec![None; dag.len()];
        for (child, def) in self.mechanisms {
            let ci = dag.index_of(&child)?;
            if mechanisms[ci].is_some() {
                return Err(Error::DuplicateMechanism(child));
            }
            let mech = match def {
                MechanismDef::Table { parents, rows } => {
                    let parents = parents
                        .iter()
                        .map(|p| dag.index_of(p))
                        .collect::<Result<Vec<_>>>()?;
                    let mut table = BTreeMap::new();
                    for (key, out) in rows {
                        if key.len() != parents.len() {
                            return Err(Error::MechanismArity {
                                child,
                                expected: parents.len(),
                                found: key.len(),
                            });
                        }
                        table.insert(key, out);
                    }
                    Mechanism { parents, table }
                }
                MechanismDef::Sum { parents } => {
                    let parents = match parents {
                        Some(ps) => ps
                            .iter()
                            .map(|p| dag.index_of(p))
                            .collect::<Result<Vec<_>>>()?,
                        None => dag.parents(ci).to_vec(),
                    };
                    let domains: Vec<&[Level]> = parents
                        .iter()
                        .map(|&p| self.variables[p].domain())
                        .collect();
                    let mut table = BTreeMap::new();
                    for_each_assignment(&domains, |key| {
                        table.insert(key.to_vec(), key.iter().sum());
                    });
                    Mechanism { parents, table }
                }
            };
            mechanisms[ci] = Some(mech);
        }
        Scm::from_parts(self.variables, dag, mechanisms)
    }
}

/// A discrete structural causal model with deterministic mechanisms.
///
/// Parentless variables are exogenous and range over their whole domain; every
/// other variable carries a [`Mechanism`] over exactly its graph parents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scm {
    variables: Vec<Variable>,
    dag: CausalDag,
    mechanisms: Vec<Option<Mechanism>>,
}

impl Scm {
    pub fn builder() -> ScmBuilder {
        ScmBuilder::new()
    }

    pub(crate) fn from_parts(
        variables: Vec<Variable>,
        dag: CausalDag,
        mechanisms: Vec<Option<Mechanism>>,
    ) -> Result<Self> {
        for (i, var) in variables.iter().enumerate() {
            let graph_parents = dag.parents(i);
            let Some(mech) = &mechanisms[i] else {
                if graph_parents.is_empty() {
                    continue;
                }
                return Err(Error::MissingMechanism(var.name.clone()));
            };
            if graph_parents.is_empty() {
                return Err(Error::UnexpectedMechanism(var.name.clone()));
            }
            let mut sorted = mech.parents.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted != graph_parents || sorted.len() != mech.parents.len() {
                let names = |ps: &[usize]| ps.iter().map(|&p| dag.name(p).to_string()).collect();
                return Err(Error::MechanismParents {
                    child: var.name.clone(),
                    expected: names(graph_parents),
                    found: names(&mech.parents),
                });
            }
            let domains: Vec<&[Level]> = mech
                .parents
                .iter()
                .map(|&p| variables[p].domain())
                .collect();
            let mut missing = None;
            let mut outside = None;
            let mut covered = 0usize;
            for_each_assignment(&domains, |key| match mech.table.get(key) {
                Some(&out) => {
                    covered += 1;
                    if outside.is_none() && !var.contains(out) {
                        outside = Some(out);
                    }
                }
                None => {
                    if missing.is_none() {
                        missing = Some(key.to_vec());
                    }
                }
            });
            if let Some(inputs) = missing {
                return Err(Error::NonTotalMechanism {
                    child: var.name.clone(),
                    inputs,
                });
            }
            if let Some(level) = outside {
                return Err(Error::OutOfDomain {
                    var: var.name.clone(),
                    level,
                });
            }
            if covered != mech.table.len() {
                // Keys outside the parent domains.
                let (key, _) = mech
                    .table
                    .iter()
                    .find(|(k, _)| {
                        k.iter()
                            .zip(&mech.parents)
                            .any(|(&l, &p)| !variables[p].contains(l))
                    })
                    .expect("extra key exists");
                let (pos, &level) = key
                    .iter()
                    .enumerate()
                    .find(|&(j, &l)| !variables[mech.parents[j]].contains(l))
                    .expect("out-of-domain key level");
                return Err(Error::OutOfDomain {
                    var: variables[mech.parents[pos]].name.clone(),
                    level,
                });
            }
        }
        Ok(Self {
            variables,
            dag,
            mechanisms,
        })
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, index: usize) -> &Variable {
        &self.variables[index]
    }

    pub fn names(&self) -> Vec<String> {
        self.variables.iter().map(|v| v.name.clone()).collect()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.dag.index_of(name)
    }

    pub fn dag(&self) -> &CausalDag {
        &self.dag
    }

    pub fn mechanism(&self, index: usize) -> Option<&Mechanism> {
        self.mechanisms[index].as_ref()
    }

    pub fn is_exogenous(&self, index: usize) -> bool {
        self.mechanisms[index].is_none()
    }

    pub fn exogenous(&self) -> Vec<usize> {
        (0..self.variables.len())
            .filter(|&i| self.is_exogenous(i))
            .collect()
    }

    /// Completes a world from its exogenous levels by propagating mechanisms in
    /// topological order. `exogenous` is aligned with [`Scm::exogenous`].
    pub fn propagate(&self, exogenous: &[Level]) -> World {
        let mut values = alloc::vec![0; self.variables.len()];
        for (&i, &l) in self.exogenous().iter().zip(exogenous) {
            values[i] = l;
        }
        self.fill_endogenous(&mut values);
        World(values)
    }

    pub(crate) fn fill_endogenous(&self, values: &mut [Level]) {
        let mut key = Vec::new();
        for &v in self.dag.topological_order() {
            if let Some(mech) = &self.mechanisms[v] {
                key.clear();
                key.extend(mech.parents.iter().map(|&p| values[p]));
                values[v] = mech.evaluate(&key).expect("mechanisms are total");
            }
        }
    }

    /// Evaluates one variable from a partial assignment, computing whatever
    /// ancestors are missing. Every exogenous ancestor must be present.
    pub(crate) fn evaluate_node(&self, node: usize, known: &mut BTreeMap<usize, Level>) -> Level {
        if let Some(&l) = known.get(&node) {
            return l;
        }
        let mech = self.mechanisms[node]
            .as_ref()
            .expect("exogenous ancestors are assigned");
        let key: Vec<Level> = mech
            .parents
            .iter()
            .map(|&p| self.evaluate_node(p, known))
            .collect();
        let out = mech.evaluate(&key).expect("mechanisms are total");
        known.insert(node, out);
        out
    }

    /// Whether a world lies in every domain and agrees with every mechanism.
    pub fn is_consistent(&self, world: &World) -> bool {
        if world.0.len() != self.variables.len() {
            return false;
        }
        let in_domain = world
            .0
            .iter()
            .zip(&self.variables)
            .all(|(&l, v)| v.contains(l));
        in_domain
            && self.mechanisms.iter().enumerate().all(|(i, m)| match m {
                None => true,
                Some(mech) => {
                    let key: Vec<Level> = mech.parents.iter().map(|&p| world.0[p]).collect();
                    mech.evaluate(&key) == Some(world.0[i])
                }
            })
    }

    pub fn enumerate_worlds(&self) -> WorldTable {
        let exo = self.exogenous();
        let domains: Vec<&[Level]> = exo.iter().map(|&i| self.variables[i].domain()).collect();
        let mut worlds = Vec::new();
        for_each_assignment(&domains, |levels| worlds.push(self.propagate(levels)));
        WorldTable::new(self.names(), worlds)
    }

    /// Removes an endogenous variable by composing its mechanism into each child.
    ///
    /// Children inherit the removed variable's parents, so the world table over
    /// the remaining variables is unchanged.
    pub fn splice_out(&self, name: &str) -> Result<Scm> {
        let v = self.index_of(name)?;
        let Some(spliced) = &self.mechanisms[v] else {
            return Err(Error::UnexpectedMechanism(name.to_string()));
        };
        let keep: Vec<usize> = (0..self.variables.len()).filter(|&i| i != v).collect();
        let remap = |i: usize| keep.iter().position(|&k| k == i).expect("kept node");

        let mut mechanisms = Vec::with_capacity(keep.len());
        let mut edges = Vec::new();
        for &c in &keep {
            let Some(mech) = &self.mechanisms[c] else {
                mechanisms.push(None);
                continue;
            };
            if !mech.parents.contains(&v) {
                edges.extend(mech.parents.iter().map(|&p| (remap(p), remap(c))));
                mechanisms.push(Some(Mechanism {
                    parents: mech.parents.iter().map(|&p| remap(p)).collect(),
                    table: mech.table.clone(),
                }));
                continue;
            }
            let mut parents: Vec<usize> = mech
                .parents
                .iter()
                .copied()
                .filter(|&p| p != v)
                .chain(spliced.parents.iter().copied())
                .collect();
            parents.sort_unstable();
            parents.dedup();
            let domains: Vec<&[Level]> = parents
                .iter()
                .map(|&p| self.variables[p].domain())
                .collect();
            let mut table = BTreeMap::new();
            for_each_assignment(&domains, |key| {
                let lookup = |node: usize| key[parents.iter().position(|&p| p == node).unwrap()];
                let inner: Vec<Level> = spliced.parents.iter().map(|&p| lookup(p)).collect();
                let mid = spliced.evaluate(&inner).expect("total");
                let outer: Vec<Level> = mech
                    .parents
                    .iter()
                    .map(|&p| if p == v { mid } else { lookup(p) })
                    .collect();
                table.insert(key.to_vec(), mech.evaluate(&outer).expect("total"));
            });
            edges.extend(parents.iter().map(|&p| (remap(p), remap(c))));
            mechanisms.push(Some(Mechanism {
                parents: parents.iter().map(|&p| remap(p)).collect(),
                table,
            }));
        }
        let variables: Vec<Variable> = keep.iter().map(|&i| self.variables[i].clone()).collect();
        let dag = CausalDag::from_indices(variables.iter().map(|v| v.name.clone()).collect(), edges)?;
        Scm::from_parts(variables, dag, mechanisms)
    }

    /// The graph with every edge whose parent the child's mechanism ignores removed.
    pub fn effective_dag(&self) -> CausalDag {
        let mut edges = Vec::new();
        for (c, m) in self.mechanisms.iter().enumerate() {
            if let Some(mech) = m {
                for (pos, &p) in mech.parents.iter().enumerate() {
                    if mech.depends_on(pos) {
                        edges.push((p, c));
                    }
                }
            }
        }
        CausalDag::from_indices(self.names(), edges).expect("subgraph of a DAG")
    }

    pub(crate) fn with_mechanism_removed(&self, target: usize) -> Scm {
        let edges: Vec<(usize, usize)> = self
            .dag
            .edges()
            .into_iter()
            .filter(|&(_, b)| b != target)
            .collect();
        let dag = CausalDag::from_indices(self.dag.nodes.clone(), edges).expect("subgraph of a DAG");
        let mut mechanisms = self.mechanisms.clone();
        mechanisms[target] = None;
        Scm {
            variables: self.variables.clone(),
            dag,
            mechanisms,
        }
    }
}

pub fn enumerate_worlds(scm: &Scm) -> WorldTable {
    scm.enumerate_worlds()
}

/// Calls `f` with every combination of levels, the last domain varying fastest.
pub(crate) fn for_each_assignment(domains: &[&[Level]], mut f: impl FnMut(&[Level])) {
    if domains.iter().any(|d| d.is_empty()) {
        return;
    }
    let mut idx = alloc::vec![0usize; domains.len()];
    let mut current: Vec<Level> = domains.iter().map(|d| d[0]).collect();
    loop {
        f(&current);
        let mut pos = domains.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < domains[pos].len() {
                current[pos] = domains[pos][idx[pos]];
                break;
            }
            idx[pos] = 0;
            current[pos] = domains[pos][0];
        }
    }
}

/// A total assignment of levels, aligned with the columns of its table or model.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct World(pub(crate) Vec<Level>);

impl World {
    pub fn new(values: Vec<Level>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[Level] {
        &self.0
    }

    pub fn get(&self, column: usize) -> Level {
        self.0[column]
    }
}

impl fmt::Display for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str(")")
    }
}

/// A deduplicated set of worlds, sorted lexicographically in column order.
/// Every member carries the same weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldTable {
    columns: Vec<String>,
    worlds: Vec<World>,
}

impl WorldTable {
    pub fn new(columns: Vec<String>, mut worlds: Vec<World>) -> Self {
        debug_assert!(worlds.iter().all(|w| w.0.len() == columns.len()));
        worlds.sort_unstable();
        worlds.dedup();
        Self { columns, worlds }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn worlds(&self) -> &[World] {
        &self.worlds
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn contains(&self, world: &World) -> bool {
        self.worlds.binary_search(world).is_ok()
    }

    pub fn filter(&self, mut keep: impl FnMut(&World) -> bool) -> WorldTable {
        WorldTable {
            columns: self.columns.clone(),
            worlds: self.worlds.iter().filter(|w| keep(w)).cloned().collect(),
        }
    }

    /// Restricts every world to `columns`, in the given order.
    pub fn project<S: AsRef<str>>(&self, columns: &[S]) -> Result<WorldTable> {
        let idx = columns
            .iter()
            .map(|c| self.column_index(c.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let worlds = self
            .worlds
            .iter()
            .map(|w| World(idx.iter().map(|&i| w.0[i]).collect()))
            .collect();
        Ok(WorldTable::new(
            columns.iter().map(|c| c.as_ref().to_string()).collect(),
            worlds,
        ))
    }

    pub fn is_subset(&self, other: &WorldTable) -> bool {
        self.columns == other.columns && self.worlds.iter().all(|w| other.contains(w))
    }

    /// Worlds in exactly one of the two tables, sorted.
    pub fn symmetric_difference(&self, other: &WorldTable) -> Vec<World> {
        let mut out: Vec<World> = self
            .worlds
            .iter()
            .filter(|w| !other.contains(w))
            .chain(other.worlds.iter().filter(|w| !self.contains(w)))
            .cloned()
            .collect();
        out.sort_unstable();
        out
    }

    /// `(name, level)` pairs of one world.
    pub fn assignment<'a>(&'a self, world: &'a World) -> impl Iterator<Item = (&'a str, Level)> {
        self.columns
            .iter()
            .map(String::as_str)
            .zip(world.0.iter().copied())
    }
}

/// `x ⟂ y | given`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndependenceStatement {
    x: String,
    y: String,
    given: BTreeSet<String>,
}

impl IndependenceStatement {
    pub fn new<S: Into<String>>(
        x: impl Into<String>,
        y: impl Into<String>,
        given: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let x = x.into();
        let y = y.into();
        let given: BTreeSet<String> = given.into_iter().map(Into::into).collect();
        if x == y || given.contains(&x) || given.contains(&y) {
            return Err(Error::InvalidStatement);
        }
        Ok(Self { x, y, given })
    }

    pub fn marginal(x: impl Into<String>, y: impl Into<String>) -> Result<Self> {
        Self::new(x, y, core::iter::empty::<String>())
    }

    pub fn x(&self) -> &str {
        &self.x
    }

    pub fn y(&self) -> &str {
        &self.y
    }

    pub fn given(&self) -> &BTreeSet<String> {
        &self.given
    }
}

impl fmt::Display for IndependenceStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⟂ {}", self.x, self.y)?;
        if !self.given.is_empty() {
            f.write_str(" | ")?;
            for (i, z) in self.given.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                f.write_str(z)?;
            }
        }
        Ok(())
    }
}

//! Random desk-scale models and a brute-force d-separation oracle.
//!
//! The oracle works from a bare edge list: it enumerates every simple path of
//! the skeleton and applies the chain, fork and collider blocking rules path by
//! path. It shares no code with the library's traversal.

#![allow(dead_code)]

use std::collections::BTreeSet;

use finality_core::{CausalDag, Level, Scm, Variable};
use rand::seq::SliceRandom;
use rand::Rng;

pub struct RandomDag {
    pub names: Vec<String>,
    pub edges: Vec<(usize, usize)>,
}

impl RandomDag {
    pub fn generate(rng: &mut impl Rng, max_nodes: usize) -> Self {
        let n = rng.gen_range(2..=max_nodes);
        let density: f64 = rng.gen_range(0.2..0.8);
        // Edges follow a hidden order; declaration order is independent of it.
        let mut hidden: Vec<usize> = (0..n).collect();
        hidden.shuffle(rng);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(density) {
                    edges.push((hidden[i], hidden[j]));
                }
            }
        }
        Self {
            names: (0..n).map(|i| format!("V{i}")).collect(),
            edges,
        }
    }

    pub fn dag(&self) -> CausalDag {
        CausalDag::new(
            self.names.clone(),
            self.edges.iter().map(|&(a, b)| (self.names[a].clone(), self.names[b].clone())),
        )
        .expect("generated graph is acyclic")
    }
}

fn oracle_descendants(n: usize, edges: &[(usize, usize)], node: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![node];
    while let Some(v) = stack.pop() {
        for &(a, b) in edges {
            if a == v && seen.insert(b) {
                stack.push(b);
            }
        }
    }
    debug_assert!(seen.iter().all(|&d| d < n));
    seen
}

/// d-separation by enumerating every simple path between `x` and `y`.
pub fn oracle_d_separated(n: usize, edges: &[(usize, usize)], x: usize, y: usize, given: &BTreeSet<usize>) -> bool {
    let has = |a: usize, b: usize| edges.contains(&(a, b));
    let mut paths = Vec::new();
    let mut path = vec![x];
    collect_paths(n, edges, y, &mut path, &mut paths);
    paths.iter().all(|p| {
        p.windows(3).any(|w| {
            let (prev, mid, next) = (w[0], w[1], w[2]);
            let collider = has(prev, mid) && has(next, mid);
            if collider {
                let opened = given.contains(&mid)
                    || oracle_descendants(n, edges, mid).iter().any(|d| given.contains(d));
                !opened
            } else {
                given.contains(&mid)
            }
        })
    })
}

fn collect_paths(n: usize, edges: &[(usize, usize)], target: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let last = *path.last().unwrap();
    if last == target {
        out.push(path.clone());
        return;
    }
    for v in 0..n {
        let adjacent = edges.contains(&(last, v)) || edges.contains(&(v, last));
        if adjacent && !path.contains(&v) {
            path.push(v);
            collect_paths(n, edges, target, path, out);
            path.pop();
        }
    }
}

/// Every `(x, y, Z)` query over `n` nodes with `x < y`.
pub fn all_queries(n: usize) -> Vec<(usize, usize, BTreeSet<usize>)> {
    let mut out = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            let rest: Vec<usize> = (0..n).filter(|&v| v != x && v != y).collect();
            for mask in 0u32..(1 << rest.len()) {
                let z = rest.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &v)| v).collect();
                out.push((x, y, z));
            }
        }
    }
    out
}

/// A random SCM: up to `max_vars` variables, domains of 2 to `max_levels` levels,
/// uniformly random mechanism tables.
pub fn random_scm(rng: &mut impl Rng, max_vars: usize, max_levels: usize) -> Scm {
    let shape = RandomDag::generate(rng, max_vars);
    let sizes: Vec<usize> = shape.names.iter().map(|_| rng.gen_range(2..=max_levels)).collect();
    let mut builder = Scm::builder();
    for (name, &k) in shape.names.iter().zip(&sizes) {
        builder = builder.variable(Variable::range(name.clone(), 0, k as Level - 1).unwrap());
    }
    for &(a, b) in &shape.edges {
        builder = builder.edge(shape.names[a].clone(), shape.names[b].clone());
    }
    for (c, name) in shape.names.iter().enumerate() {
        let mut parents: Vec<usize> = shape.edges.iter().filter(|e| e.1 == c).map(|e| e.0).collect();
        if parents.is_empty() {
            continue;
        }
        parents.sort_unstable();
        let mut rows = Vec::new();
        let mut key = vec![0 as Level; parents.len()];
        loop {
            rows.push((key.clone(), rng.gen_range(0..sizes[c]) as Level));
            let mut pos = parents.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                key[pos] += 1;
                if (key[pos] as usize) < sizes[parents[pos]] {
                    break;
                }
                key[pos] = 0;
            }
            if key.iter().all(|&k| k == 0) {
                break;
            }
        }
        builder = builder.table(name.clone(), parents.iter().map(|&p| shape.names[p].clone()), rows);
    }
    builder.build().expect("generated model is well formed")
}

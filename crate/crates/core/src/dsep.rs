//! Graphical separation via the reachable-trail ("Bayes ball") traversal.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::model::{CausalDag, IndependenceStatement};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Arrival {
    /// Reached from one of the node's children.
    FromChild,
    /// Reached from one of the node's parents.
    FromParent,
}

/// Whether every trail between `x` and `y` is blocked by the conditioning set.
///
/// A trail is blocked at a non-collider in the conditioning set, or at a collider
/// that neither is in the conditioning set nor has a descendant there.
pub fn d_separated(dag: &CausalDag, stmt: &IndependenceStatement) -> Result<bool> {
    let x = dag.index_of(stmt.x())?;
    let y = dag.index_of(stmt.y())?;
    let mut observed = vec![false; dag.len()];
    for z in stmt.given() {
        observed[dag.index_of(z)?] = true;
    }

    // Nodes that are observed or have an observed descendant: colliders there pass.
    let mut opens_collider = observed.clone();
    let mut stack: Vec<usize> = (0..dag.len()).filter(|&v| observed[v]).collect();
    while let Some(v) = stack.pop() {
        for &p in dag.parents(v) {
            if !opens_collider[p] {
                opens_collider[p] = true;
                stack.push(p);
            }
        }
    }

    let mut visited = BTreeSet::new();
    let mut queue = vec![(x, Arrival::FromChild)];
    while let Some((v, arrival)) = queue.pop() {
        if !visited.insert((v, arrival)) {
            continue;
        }
        if v == y && !observed[v] {
            return Ok(false);
        }
        match arrival {
            Arrival::FromChild => {
                if !observed[v] {
                    queue.extend(dag.parents(v).iter().map(|&p| (p, Arrival::FromChild)));
                    queue.extend(dag.children(v).iter().map(|&c| (c, Arrival::FromParent)));
                }
            }
            Arrival::FromParent => {
                if !observed[v] {
                    queue.extend(dag.children(v).iter().map(|&c| (c, Arrival::FromParent)));
                }
                if opens_collider[v] {
                    queue.extend(dag.parents(v).iter().map(|&p| (p, Arrival::FromChild)));
                }
            }
        }
    }
    Ok(true)
}

//! The do-operator: one surgical intervention per derived model.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};

use crate::error::{Error, Result};
use crate::independence::{conditional_distribution, Probability};
use crate::model::{CausalDag, Level, Scm, WorldTable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterventionSpec {
    target: String,
}

impl InterventionSpec {
    pub fn new(target: impl Into<String>) -> Self {
        Self {
            target: target.into(),
        }
    }

    pub fn target(&self) -> &str {
        &self.target
    }
}

/// A model after `do(target)`: every arrow into the target is removed and its
/// mechanism dropped, so it ranges freely over its domain. Nodes are never removed.
///
/// There is no way to intervene on an `MStarModel` again; a second intervention
/// needs a fresh surgery on the base model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MStarModel {
    base: Scm,
    spec: InterventionSpec,
    target: usize,
    surgered: Scm,
}

impl MStarModel {
    pub fn base(&self) -> &Scm {
        &self.base
    }

    pub fn intervention(&self) -> &InterventionSpec {
        &self.spec
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn target_name(&self) -> &str {
        self.spec.target()
    }

    /// The base model with the target's inbound arrows and mechanism removed.
    pub fn surgered(&self) -> &Scm {
        &self.surgered
    }

    pub fn surgered_dag(&self) -> &CausalDag {
        self.surgered.dag()
    }

    pub fn enumerate_worlds(&self) -> WorldTable {
        self.surgered.enumerate_worlds()
    }
}

pub fn do_surgery(scm: &Scm, spec: InterventionSpec) -> Result<MStarModel> {
    let target = scm.index_of(spec.target())?;
    Ok(MStarModel {
        base: scm.clone(),
        surgered: scm.with_mechanism_removed(target),
        spec,
        target,
    })
}

/// Worlds of the intervened model, with the target free over its whole domain.
pub fn enumerate_worlds_star(m: &MStarModel) -> WorldTable {
    m.enumerate_worlds()
}

/// `P(query | do(target = value))`: the uniform distribution of `query` over the
/// intervened worlds where the target holds `value`.
pub fn interventional_distribution(
    m: &MStarModel,
    value: Level,
    query: &str,
) -> Result<BTreeMap<Level, Probability>> {
    if !m.base.variable(m.target).contains(value) {
        return Err(Error::OutOfDomain {
            var: m.target_name().to_string(),
            level: value,
        });
    }
    conditional_distribution(&m.enumerate_worlds(), Some((m.target_name(), value)), query)
}

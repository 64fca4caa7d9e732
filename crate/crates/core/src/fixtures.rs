//! Small models shared by unit tests.

use alloc::vec;

use crate::model::{Scm, Variable};

/// Weather and heating drive the room temperature; heating drives the bill.
pub(crate) fn m1() -> Scm {
    Scm::builder()
        .variable(Variable::binary("W"))
        .variable(Variable::binary("H"))
        .variable(Variable::range("T", 0, 2).unwrap())
        .variable(Variable::binary("B"))
        .edge("W", "T")
        .edge("H", "T")
        .edge("H", "B")
        .sum("T")
        .sum("B")
        .build()
        .unwrap()
}

/// `X -> Y -> Z` with identity mechanisms.
pub(crate) fn identity_chain() -> Scm {
    Scm::builder()
        .variable(Variable::binary("X"))
        .variable(Variable::binary("Y"))
        .variable(Variable::binary("Z"))
        .edge("X", "Y")
        .edge("Y", "Z")
        .table("Y", ["X"], [(vec![0], 0), (vec![1], 1)])
        .table("Z", ["Y"], [(vec![0], 0), (vec![1], 1)])
        .build()
        .unwrap()
}

/// `A <- C -> B` with identity mechanisms.
pub(crate) fn fork() -> Scm {
    Scm::builder()
        .variable(Variable::binary("C"))
        .variable(Variable::binary("A"))
        .variable(Variable::binary("B"))
        .edge("C", "A")
        .edge("C", "B")
        .table("A", ["C"], [(vec![0], 0), (vec![1], 1)])
        .table("B", ["C"], [(vec![0], 0), (vec![1], 1)])
        .build()
        .unwrap()
}

//! Workbench for varieties of connected po-groupoids: finite algebras and
//! their related orders, congruences and direct decompositions, finite
//! model search, witness-term search, and synthesis and evaluation of the
//! first-order formulas that define direct indecomposability.

pub mod algebra;
pub mod congruence;
pub mod formula;
pub mod order;
pub mod search;
pub mod witness;
pub mod harness;

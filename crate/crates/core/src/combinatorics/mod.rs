//! Constrained index sets, pair-matching predicates, clusters and the
//! constant families entering the limit covariances.

mod clusters;
mod constants;
mod counting;
pub mod exact;
mod index_sets;
mod predicates;
mod trace_formula;

pub use clusters::{cluster_decompose, count_b_pl, ClusterPartition};
pub use constants::{rc_constants, rc_g, sc_constants, ScConstant, TheoryMode};
pub use counting::{card_a2ps, h_pk};
pub use index_sets::{count, enumerate, for_each, ConstraintTuple, EnumerationCaps, Family};
pub use predicates::{
    is_odd_even_pair_matched, is_opposite_sign_pair_matched, value_is_opposite_sign_matched,
};
pub use trace_formula::{Monomial, TracePolynomial};

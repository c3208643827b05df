//! Finite posets, lattices and the order relations between sets and
//! extended-real functionals on them.

mod ext;
mod fixture;
mod lattice;
mod linear;
mod poset;
mod relations;
mod set;

pub use ext::{ExtValue, ExtendedFunctional};
pub use fixture::{FunctionalFixture, LatticeFixture};
pub use lattice::{lattice_catalog, poset_catalog, FiniteLattice};
pub use linear::{is_t_monotone, linear_functional, positive_part, precsim_linear, GridLattice, LinearTable};
pub use poset::FinitePoset;
pub use relations::{
    check_modified_transitivity, distributive_identity_holds, effective_domain, is_submodular, precsim, precsim_at,
    precsim_witness, star_leq, strong_set_order,
};
pub use set::{all_subsets, Elem, ElemSet};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("malformed order data: {0}")]
    Malformed(String),
    #[error("relation is not reflexive at {0}")]
    NotReflexive(String),
    #[error("relation is not antisymmetric: {0} and {1} are mutually related")]
    NotAntisymmetric(String, String),
    #[error("relation is not transitive: {0} <= {1} <= {2} but not {0} <= {2}")]
    NotTransitive(String, String, String),
    #[error("elements {0} and {1} have no meet or no join")]
    NotALattice(String, String),
    #[error("element id {elem} is outside the carrier of size {size}")]
    CarrierMismatch { elem: u32, size: usize },
    #[error("functional is +inf everywhere")]
    EmptyEffectiveDomain,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("precondition violated: {}", .0.join("; "))]
    Precondition(Vec<String>),
}

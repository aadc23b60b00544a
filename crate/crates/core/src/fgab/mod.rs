//! Exact integer linear algebra: matrices, Smith form, finitely generated abelian
//! groups and constrained integer feasibility.

mod feasible;
mod group;
mod lattice;
mod lp;
mod matrix;
mod quotient;
mod smith;

pub use feasible::{feasible_constrained, respects, Budget, CoordConstraint};
pub use group::{subgroup_membership, FgGroup, GroupElem, GroupHom};
pub use lattice::{satisfies, solution_lattice, solve_linear, AffineLattice};
pub use matrix::{ints, IntMatrix};
pub use quotient::Quotient;
pub use smith::{column_basis, smith, unimodular_inverse, SmithDecomposition};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FgabError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("not a homomorphism: {0}")]
    BadHom(String),
    #[error("feasibility search exceeded its node budget")]
    ResourceLimit,
}

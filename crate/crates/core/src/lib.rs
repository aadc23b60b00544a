//! Monoids of poset-indexed systems of abelian groups.
//!
//! [`isystem::ISystem`] holds the input data; [`monoid::Monoid`] builds the monoid,
//! decides equality and the algebraic order exactly and computes refinements.

pub mod dot;
pub mod fgab;
pub mod fixtures;
pub mod isystem;
pub mod monoid;
pub mod poset;
pub mod props;
pub mod random;
pub mod surgery;

pub use fgab::{Budget, FgGroup, FgabError, GroupElem, GroupHom, IntMatrix};
pub use monoid::{ElemClass, MonElem, Monoid, MonoidError, RefinementSquare};
pub use isystem::{CompatiblePair, ISystem, Kind, LocalElem, SystemError, SystemHom, Violation};
pub use poset::{ChainTree, LowerSet, Poset, PosetError};

//! Normal structure, conjugate-product witnesses and first-order model
//! checking for finite groups.
//!
//! The crate is organised bottom-up:
//!
//! * [`group`] - groups as multiplication tables, permutation closure and
//!   named families;
//! * [`lattice`] - normal closures, the normal-subgroup lattice, monolith,
//!   upper central series and chief factors;
//! * [`witness`] - conjugate product terms, minimal witnesses for membership
//!   conditions and the descent into the monolith;
//! * [`folog`] - first-order formulas in the language of groups: parsing,
//!   printing, evaluation and the definability formulas;
//! * [`construct`] - members of the variety generated by a group, built by
//!   products, subgroups and quotients.

pub mod construct;
pub mod folog;
pub mod group;
pub mod lattice;
pub mod witness;

pub use group::{Elem, FamilySpec, FiniteGroup, GroupError, Permutation};
pub use lattice::{Analysis, AnalysisReport, CentralSeries, ElementSet};

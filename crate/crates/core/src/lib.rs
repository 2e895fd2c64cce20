//! Combinatorics of star reducible Coxeter groups.
//!
//! The crate provides Coxeter graphs and their classification by star
//! reducibility, the commutation monoid with Cartier-Foata normal forms,
//! fully commutative elements and star operations, the rewriting invariant
//! `h`, exact Laurent arithmetic, and the generalized Temperley-Lieb
//! algebra with its monomial, standard, and canonical bases.

pub mod cache;
pub mod cli;
pub mod elements;
pub mod graph;
pub mod hinv;
pub mod laurent;
pub mod star;
pub mod tl;
pub mod trace;

pub use elements::{FcElement, Side};
pub use graph::{Bond, CoxeterGraph, FamilySpec};
pub use laurent::LaurentInt;
pub use tl::{Basis, TlContext, TlElement};
pub use trace::{Trace, Word};

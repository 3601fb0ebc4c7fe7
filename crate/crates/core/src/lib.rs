//! Finite-state automorphisms of rooted trees.
//!
//! Elements are Mealy machines kept in a canonical minimized form, so
//! equality of automorphisms is structural. On top of the section calculus
//! sit activity growth and its classification, the nucleus and germs of
//! contracting groups, level Schreier graphs with Følner candidates, and
//! bounded searches for relators and boundary stabilizers.

pub mod activity;
pub mod automaton;
pub mod catalog;
pub mod cayley;
pub mod cli;
pub mod error;
pub mod freeness;
pub mod group;
pub mod nucleus;
pub mod report;
pub mod schreier;
pub mod tree;
pub mod word;

pub use activity::{classify_activity, theta, ActivityKind};
pub use automaton::{Automorphism, StateTable};
pub use error::{Error, Result};
pub use group::GeneratorSet;
pub use tree::{Alphabet, BoundaryPoint, Letter, Permutation, Vertex};
pub use word::GroupWord;

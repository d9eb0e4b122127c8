//! Exact invariants of abstract Newton trees at infinity.
//!
//! A tree is built once ([`tree::build_tree`] or [`io::parse`]), validated against the
//! axioms, and then fed through the analysis pipeline in [`analysis`].

pub mod analysis;
pub mod audit;
pub mod characteristic;
pub mod classify;
pub mod error;
pub mod generate;
pub mod io;
pub mod local;
pub mod multiplicity;
pub mod oracle;
pub mod report;
pub mod structure;
pub mod tree;

pub use error::AnalysisError;
pub use tree::{build_tree, CellRef, EdgeRef, Tree, TreeError};

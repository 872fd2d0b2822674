//! Bounded laboratory for the labeled-tree constructions whose maximal
//! intersection families compute a 1-generic.
//!
//! The crate builds the FIP and priority (2IP) labelings of the binary tree
//! from scripted enumerations, materializes the resulting set family,
//! evaluates the decoding functionals against finite oracles, and checks the
//! combinatorial lemmas exhaustively on the bounded universe a run produces.

pub mod algebra;
pub mod bits;
pub mod crafting;
pub mod dump;
pub mod engine;
pub mod error;
pub mod family;
pub mod functionals;
pub mod label;
pub mod lemmas;
pub mod node;
pub mod oracle;
pub mod random;
pub mod scenario;
pub mod trace;
pub mod tree;

pub use engine::{run, run_2ip, run_fip, Construction};
pub use error::{CraftError, FamilyError, OracleError, ParseError, ReplayError, ScenarioError};
pub use family::{Provenance, SetFamily, Witness};
pub use label::Label;
pub use node::Node;
pub use oracle::OracleSet;
pub use scenario::Scenario;
pub use trace::{ConstructionTrace, TraceEvent};
pub use tree::{LabelIndex, LabeledTree, Mode, Stage};

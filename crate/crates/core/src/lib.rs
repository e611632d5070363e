//! Sensing 5'→3' Watson-Crick automata: two reading heads that start at the
//! opposite ends of the input and stop when they meet.
//!
//! - [`model`]: automata, words, configurations, trimming
//! - [`format`]: the `.wka` text format
//! - [`engine`]: steps, membership, traces, bounded enumeration
//! - [`classify`]: restriction classes and determinism checkers
//! - [`witness`]: witness-language oracles and the bundled claims
//! - [`cli`]: the `wka` command line

pub mod classify;
pub mod cli;
pub mod engine;
pub mod format;
pub mod model;
pub mod witness;

pub use format::AutomatonFile;
pub use model::{Configuration, Nfa, StateId, Symbol, WkAutomaton, WkTransition, Word};

//! Brute-force laboratory for autoregressive next-token classes.
//!
//! Bit strings and generators live in [`bits`] and [`generator`]; class
//! constructions in [`classes`]; combinatorial dimensions in [`dims`];
//! learners in [`learners`]; PAC simulation in [`harness`].

pub mod bits;
pub mod class;
pub mod dims;
pub mod classes;
pub mod error;
pub mod generator;
pub mod harness;
pub mod learners;
pub mod spec;
pub mod suites;
pub mod tree;

pub use bits::{bs, Bit, BitString};
pub use class::{FiniteClass, DEFAULT_CAP};
pub use error::{Error, Result};
pub use generator::{apply_and_append, cot_trace, e2e_output, Generator, GeneratorKind, NextToken};
pub use tree::{full_generation_tree, realized_trace_tree, GenerationTree, PrefixTree, TraceTrie};

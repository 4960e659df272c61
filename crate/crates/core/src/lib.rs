//! Assignment optimization on fixed decision-diagram skeletons.
//!
//! A diagram routes each examinee type from its source to a sink by testing
//! item sets at internal vertices; sinks carry a guidance method. Given the
//! diagram shape, candidate item sets per vertex and a weighted population,
//! this crate evaluates, encodes and optimizes assignments of labels.

pub mod candidates;
pub mod cli;
pub mod datagen;
pub mod diagram;
pub mod encoder;
pub mod error;
pub mod eval;
pub mod instance;
pub mod instances;
pub mod io;
pub mod population;
pub mod solver;
pub mod universe;

pub use error::{Error, Result};

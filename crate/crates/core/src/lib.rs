//! Exact cohomology and SKT polarisation computations on invariant complex structures.

pub mod algebra;
pub mod builtins;
pub mod cli;
pub mod cohomology;
pub mod deformation;
mod error;
pub mod exact;
pub mod hodge_riemann;
pub mod metric;
pub mod polarisation;

pub use error::{Error, Result};

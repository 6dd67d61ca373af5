//! File format, command dispatch and JSON reports.

mod commands;
mod format;

pub use commands::{load_input, run, run_on, Cli, Command, InputArgs, Outcome, SCHEMA};
pub use format::{parse_form, parse_manifold, parse_vector_form, print_manifold, ManifoldFile, RealBlock};

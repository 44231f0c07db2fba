//! Command-line front end: JSON documents in, canonical JSON out.

pub mod checks;
pub mod commands;
pub mod corpus;
pub mod document;

pub use commands::{run, Cli, Outcome};

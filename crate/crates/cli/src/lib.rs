//! Command-line front end for `flowcont`.
//!
//! Exit codes: 0 yes/pass, 1 no/fail, 2 unknown (budget), 3 usage or input error.

mod commands;
pub mod instances;
pub mod selftest;

pub use commands::{load_graph, load_map, run, Cli, Command, CommandResult, Status};

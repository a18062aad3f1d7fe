//! Batch front end for the bound engine: input files, the `bound`,
//! `growth`, `converge` and `selftest` commands, and their renderings.

pub mod commands;
pub mod error;
pub mod input;
pub mod random;
pub mod report;
pub mod selftest;

pub use commands::{cmd_bound, cmd_converge, cmd_growth, parse_methods, BoundOptions, GrowthOptions, Outcome};
pub use error::CliError;
pub use input::{parse_input, read_input, InputDocument, LoadedInput};
pub use report::{Arithmetic, ConvergeReport, OutputFormat, RunReport};

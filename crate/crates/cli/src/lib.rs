//! Library side of the `matpi` command: spec parsing, the subcommands, and
//! run reports.

pub mod commands;
pub mod report;
pub mod spec;

pub use commands::{CliError, Input};
pub use report::{Check, CheckResult, RunReport};
pub use spec::{parse_spec, AlgebraSpec, SpecError};

//! Command-line front end: experiment specs, resumable runs, CSV and
//! manifest output, and named self-checks.

pub mod args;
pub mod config;
pub mod emit;
pub mod error;
pub mod resume;
pub mod run;
pub mod spec;
pub mod verify;

pub use error::{CliError, CliResult};
pub use run::{run, RunReport};
pub use spec::{ExperimentSpec, Kind, Plan};

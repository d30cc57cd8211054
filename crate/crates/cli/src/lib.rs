//! Command-line front end: a registry of built-in scenarios, configuration
//! parsing, and the pipeline that writes trace, report and figure files.

pub mod config;
pub mod error;
pub mod pipeline;
pub mod registry;
pub mod svg;

pub use config::{Cli, CommandKind, Input, RunConfig, ScenarioId, Stages, Tolerances};
pub use error::CliError;
pub use pipeline::{run, RunOutcome};
pub use svg::{emit_svg, render_svg};

//! Declarative front end: parse a manifest of monoids, schemes and tasks,
//! then run the tasks and render a report.

pub mod manifest;
pub mod parse;
pub mod run;

pub use manifest::Manifest;
pub use parse::{parse, SyntaxError};
pub use run::{run, Options, Report, UsageError};

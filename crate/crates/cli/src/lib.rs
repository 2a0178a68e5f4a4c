//! Configuration, execution and reporting for the `optrr` command.

pub mod compare;
pub mod config;
pub mod document;
pub mod error;
pub mod output;
pub mod run;

pub use compare::{compare_tables, load_table, CompareOptions, Comparison, Tolerance};
pub use config::{Command, Format, RunConfig};
pub use document::{ResultDocument, Table};
pub use error::{CliError, CliResult};
pub use output::{write_atomic, write_outputs};
pub use run::execute;

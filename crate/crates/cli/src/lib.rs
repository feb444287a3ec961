//! Scenario runner for `deltahom`: TOML scenario files in, CSV tables and
//! density grids out.

pub mod catalog;
pub mod config;
pub mod error;
pub mod run;
pub mod table;

pub use config::{Kind, Scenario};
pub use error::CliError;
pub use run::run;

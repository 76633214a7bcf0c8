//! CLI, configuration, persistence, and experiment orchestration.

pub mod cli;
pub mod config;
pub mod report;

pub use cli::cli_dispatch;
pub use config::{load_config, RunConfig};
pub use report::{report, Summary};

//! Scenario runner for the `apsflow` library: TOML scenarios in, JSON
//! reports and CSV tables out.

pub mod app;
pub mod catalog;
pub mod report;
pub mod runner;
pub mod scenario;

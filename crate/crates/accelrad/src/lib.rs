//! Scenario runner for cavity-enhanced acceleration radiation.
//!
//! A JSON [`config::RunConfig`] selects one scenario (or a sweep over one)
//! and [`run`] turns it into a [`table::Table`] with a fixed column schema.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod config;
pub mod error;
pub mod scenario;
pub mod table;

pub use config::RunConfig;
pub use error::{CliError, CliResult};
pub use scenario::run;
pub use table::{Format, Table, Value};

//! Statline parsing, evidence reports and CSV batches behind the `pbf` binary.

pub mod batch;
pub mod report;
pub mod statline;

pub use batch::{run_batch, BatchError, RowError};
pub use report::{evaluate, MethodReport, Report, Settings};
pub use statline::{parse_statline, Statline};

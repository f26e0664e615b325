//! Reports, command runners and canned experiments behind the `slstar` binary.

pub mod commands;
pub mod experiments;
pub mod report;

pub use experiments::EXPERIMENTS;
pub use report::{error_exit_code, verify_rendered, Report, Verdict};

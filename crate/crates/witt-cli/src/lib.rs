//! File formats and the verification runner behind the `wittcheck` binary.

pub mod format;
pub mod runner;

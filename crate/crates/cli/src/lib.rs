//! Configuration loading and check suites behind the `aglsm` binary.

pub mod checks;
pub mod config;

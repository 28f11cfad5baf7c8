//! Library side of the CLI crate: report shapes, example fixtures
//! and the example replays, shared by the binary and the acceptance
//! suite.

pub mod examples;
pub mod fixtures;
pub mod report;

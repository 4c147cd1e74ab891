//! Instance files, generators and the verification suites behind the
//! `ordkit` binary.

pub mod generate;
pub mod instance;
pub mod report;
pub mod suites;

pub use instance::{emit, parse, parse_file, Instance, InstanceFile, Kind, ParseError};
pub use report::{Report, Tier, Verdict};
pub use suites::{run_suite, Params, UnknownSuite, SUITES};

//! Library side of the `quncert` command: scenario documents, CSV and report
//! formats, figure data and verification suites.

pub mod error;
pub mod figure;
pub mod report;
pub mod scenario_file;
pub mod table;
pub mod verify;

pub use error::CliError;

/// Exit status for input and usage errors.
pub const EXIT_INPUT: i32 = 2;

//! Test-problem generators, Matrix Market I/O and the experiment drivers
//! behind the `feast` command line tool.

pub mod error;
pub mod generators;
pub mod mtx;
pub mod report;
pub mod run;

pub use error::{HarnessError, Result};
pub use report::{RunReport, SweepReport};
pub use run::{run_solve, run_sweep, ProblemSource, ProblemSpec};

//! Problem files, the task runner, and output rendering behind the `genhk`
//! command.

pub mod output;
pub mod problem;
pub mod runner;

pub use output::{read_series, render, write_series, OutputError};
pub use problem::{parse_problem, Format, ProblemDocument, ProblemError};
pub use runner::{run, ResultTable, RunOptions};
